#include "akg/patch.hpp"

#include "akg/linalg.hpp"

namespace akg {

template <class S>
FramedPatch<S>::FramedPatch(Calculus<S> calc, Mat<S> frame)
    : calc_(std::move(calc)), frame_(std::move(frame)) {
  if (frame_.rows() != frame_.cols()) throw std::invalid_argument("frame matrix must be square");
  if (frame_.cols() % 2 != 0) throw std::invalid_argument("frame dimension must be even");
  coframe_ = inverse(frame_);
  compute_structure();
}

template <class S>
FramedPatch<S>::FramedPatch(Calculus<S> calc, Mat<S> frame, Mat<S> coframe)
    : calc_(std::move(calc)), frame_(std::move(frame)), coframe_(std::move(coframe)) {
  if (frame_.rows() != frame_.cols() || coframe_.rows() != frame_.rows() || coframe_.cols() != frame_.cols())
    throw std::invalid_argument("frame and coframe must be square and of equal size");
  if (frame_.cols() % 2 != 0) throw std::invalid_argument("frame dimension must be even");
  compute_structure();
}

template <class S>
void FramedPatch<S>::compute_structure() {
  const int m = dim();
  c_.assign(static_cast<std::size_t>(m) * m * m, S(0));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Vec<S> b = from_coordinates(bracket_coordinates(frame_.col(i), frame_.col(j)));
      for (int k = 0; k < m; ++k) {
        c_[(k * m + i) * m + j] = b(k);
        c_[(k * m + j) * m + i] = -b(k);
      }
    }
  }
}

template <class S>
Vec<S> FramedPatch<S>::structure_vector(int i, int j) const {
  Vec<S> v(dim());
  for (int k = 0; k < dim(); ++k) v(k) = structure(k, i, j);
  return v;
}

template <class S>
S FramedPatch<S>::apply(int i, const S& f) const {
  S acc(0);
  for (int k = 0; k < dim(); ++k) {
    if (Calculus<S>::is_literal_zero(frame_(k, i))) continue;
    const S p = calc_.partial(f, k);
    if (Calculus<S>::is_literal_zero(p)) continue;
    acc += frame_(k, i) * p;
  }
  return acc;
}

template <class S>
S FramedPatch<S>::apply(const Vec<S>& x, const S& f) const {
  S acc(0);
  for (int i = 0; i < dim(); ++i) {
    if (Calculus<S>::is_literal_zero(x(i))) continue;
    acc += x(i) * apply(i, f);
  }
  return acc;
}

template <class S>
Vec<S> FramedPatch<S>::apply(const Vec<S>& x, const Vec<S>& y) const {
  Vec<S> out(y.size());
  for (int k = 0; k < y.size(); ++k) out(k) = apply(x, y(k));
  return out;
}

template <class S>
Mat<S> FramedPatch<S>::apply(int i, const Mat<S>& m) const {
  Mat<S> out(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out(r, c) = apply(i, m(r, c));
  return out;
}

template <class S>
Vec<S> FramedPatch<S>::bracket_coordinates(const Vec<S>& x, const Vec<S>& y) const {
  const int m = dim();
  Vec<S> out = zero_vec<S>(m);
  for (int k = 0; k < m; ++k) {
    S acc(0);
    for (int i = 0; i < m; ++i) {
      if (!Calculus<S>::is_literal_zero(x(i))) acc += x(i) * calc_.partial(y(k), i);
      if (!Calculus<S>::is_literal_zero(y(i))) acc -= y(i) * calc_.partial(x(k), i);
    }
    out(k) = acc;
  }
  return out;
}

template <class S>
Vec<S> FramedPatch<S>::bracket(const Vec<S>& x, const Vec<S>& y) const {
  return from_coordinates(bracket_coordinates(to_coordinates(x), to_coordinates(y)));
}

template <class S>
Vec<S> FramedPatch<S>::bracket_frame(const Vec<S>& x, const Vec<S>& y) const {
  const int m = dim();
  Vec<S> out = apply(x, y) - apply(y, x);
  for (int a = 0; a < m; ++a) {
    if (Calculus<S>::is_literal_zero(x(a))) continue;
    for (int b = 0; b < m; ++b) {
      if (a == b || Calculus<S>::is_literal_zero(y(b))) continue;
      const S w = x(a) * y(b);
      for (int k = 0; k < m; ++k) {
        if (!Calculus<S>::is_literal_zero(structure(k, a, b))) out(k) += w * structure(k, a, b);
      }
    }
  }
  return out;
}

template <class S>
Mat<S> FramedPatch<S>::d(const Vec<S>& alpha) const {
  const int m = dim();
  Mat<S> out = zeros<S>(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      S v = apply(i, alpha(j)) - apply(j, alpha(i));
      for (int k = 0; k < m; ++k) {
        if (!Calculus<S>::is_literal_zero(structure(k, i, j))) v -= structure(k, i, j) * alpha(k);
      }
      out(i, j) = v;
      out(j, i) = -v;
    }
  }
  return out;
}

template <class S>
ThreeForm<S> FramedPatch<S>::d(const Mat<S>& beta) const {
  const int m = dim();
  // beta([e_a, e_b], e_c)
  auto on_bracket = [&](int a, int b, int c) {
    S acc(0);
    for (int l = 0; l < m; ++l) {
      if (!Calculus<S>::is_literal_zero(structure(l, a, b))) acc += structure(l, a, b) * beta(l, c);
    }
    return acc;
  };
  ThreeForm<S> out{m, std::vector<S>(static_cast<std::size_t>(m) * m * m, S(0))};
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        S v = apply(i, beta(j, k)) - apply(j, beta(i, k)) + apply(k, beta(i, j)) - on_bracket(i, j, k) +
              on_bracket(i, k, j) - on_bracket(j, k, i);
        // Fill every permutation with its sign.
        out(i, j, k) = v;
        out(j, k, i) = v;
        out(k, i, j) = v;
        out(j, i, k) = -v;
        out(i, k, j) = -v;
        out(k, j, i) = -v;
      }
    }
  }
  return out;
}

template <class S>
Vec<S> FramedPatch<S>::differential(const S& f) const {
  Vec<S> out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = apply(i, f);
  return out;
}

template class FramedPatch<Expr>;
template class FramedPatch<Jet>;

Mat<Jet> to_jets(const Mat<Expr>& m, const Point& at, const Context& ctx, const JetSpace& space) {
  Mat<Jet> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = taylor_eval(m(i, j), at, ctx, space);
  return out;
}

}  // namespace akg
