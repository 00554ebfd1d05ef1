#include "akg/almost_kahler.hpp"

#include "akg/linalg.hpp"

namespace akg {

namespace {

template <class S>
bool zero_literal(const S& s) {
  return Calculus<S>::is_literal_zero(s);
}

}  // namespace

template <class S>
AKStructure<S> make_structure(std::shared_ptr<const FramedPatch<S>> patch, Mat<S> g, Mat<S> J) {
  const int m = patch->dim();
  if (g.rows() != m || g.cols() != m || J.rows() != m || J.cols() != m)
    throw std::invalid_argument("metric and J must match the frame dimension");
  Mat<S> g_inv = inverse(g);
  return AKStructure<S>{std::move(patch), std::move(g), std::move(g_inv), std::move(J)};
}

template <class S>
S bilinear(const Vec<S>& x, const Mat<S>& m, const Vec<S>& y) {
  S acc(0);
  for (int i = 0; i < x.size(); ++i) {
    if (zero_literal(x(i))) continue;
    for (int j = 0; j < y.size(); ++j) {
      if (zero_literal(y(j)) || zero_literal(m(i, j))) continue;
      acc += x(i) * m(i, j) * y(j);
    }
  }
  return acc;
}

template <class S>
Vec<S> nijenhuis(const AKStructure<S>& s, const Vec<S>& x, const Vec<S>& y) {
  const auto& p = *s.patch;
  const Vec<S> jx = s.J * x;
  const Vec<S> jy = s.J * y;
  return Vec<S>(s.J * p.bracket_frame(jx, y) + s.J * p.bracket_frame(x, jy) + p.bracket_frame(x, y) -
                p.bracket_frame(jx, jy));
}

template <class S>
Connection<S> levi_civita(const AKStructure<S>& s) {
  const auto& p = *s.patch;
  const int m = s.dim();
  // Christoffel symbols of the first kind, lowered on the last index.
  auto bracket_g = [&](int a, int b, int c) {
    S acc(0);
    for (int l = 0; l < m; ++l) {
      if (!zero_literal(p.structure(l, a, b))) acc += p.structure(l, a, b) * s.g(l, c);
    }
    return acc;
  };
  Connection<S> t;
  t.gamma.assign(m, zeros<S>(m, m));
  for (int i = 0; i < m; ++i) {
    Mat<S> lower(m, m);  // lower(l, j) = g(nabla_i e_j, e_l)
    for (int j = 0; j < m; ++j) {
      for (int l = 0; l < m; ++l) {
        S v = p.apply(i, s.g(j, l)) + p.apply(j, s.g(i, l)) - p.apply(l, s.g(i, j)) + bracket_g(i, j, l) -
              bracket_g(i, l, j) - bracket_g(j, l, i);
        lower(l, j) = v * S(Rational(1, 2));
      }
    }
    t.gamma[i] = s.g_inv * lower;
  }
  return t;
}

template <class S>
Vec<S> covariant(const FramedPatch<S>& p, const Connection<S>& t, const Vec<S>& x, const Vec<S>& y) {
  Vec<S> out = p.apply(x, y);
  for (int i = 0; i < x.size(); ++i) {
    if (zero_literal(x(i))) continue;
    out += x(i) * (t.gamma[i] * y);
  }
  return out;
}

template <class S>
Mat<S> covariant_endo(const FramedPatch<S>& p, const Connection<S>& t, const Vec<S>& x, const Mat<S>& a) {
  Mat<S> out = zeros<S>(a.rows(), a.cols());
  for (int i = 0; i < x.size(); ++i) {
    if (zero_literal(x(i))) continue;
    const Mat<S> di = p.apply(i, a) + t.gamma[i] * a - a * t.gamma[i];
    out += x(i) * di;
  }
  return out;
}

template <class S>
Connection<S> chern_connection(const AKStructure<S>& s, const Connection<S>& lc) {
  const auto& p = *s.patch;
  const int m = s.dim();
  Connection<S> d;
  d.gamma.reserve(m);
  for (int i = 0; i < m; ++i) {
    const Mat<S> nabla_j = covariant_endo(p, lc, basis<S>(m, i), s.J);
    d.gamma.push_back(lc.gamma[i] + S(Rational(1, 2)) * (nabla_j * s.J));
  }
  return d;
}

template <class S>
Vec<S> torsion(const FramedPatch<S>& p, const Connection<S>& t, int i, int j) {
  return Vec<S>(t.gamma[i].col(j) - t.gamma[j].col(i) - p.structure_vector(i, j));
}

template <class S>
Mat<S> curvature(const FramedPatch<S>& p, const Connection<S>& t, int i, int j) {
  Mat<S> r = p.apply(i, t.gamma[j]) - p.apply(j, t.gamma[i]) + t.gamma[i] * t.gamma[j] - t.gamma[j] * t.gamma[i];
  for (int m = 0; m < p.dim(); ++m) {
    if (!zero_literal(p.structure(m, i, j))) r -= p.structure(m, i, j) * t.gamma[m];
  }
  return r;
}

template <class S>
ComplexOneForms<S> connection_one_form(const AKStructure<S>& s, const Connection<S>& t, const Mat<S>& frame) {
  const auto& p = *s.patch;
  const int m = s.dim();
  const int n = s.n();
  const Mat<S> omega = s.omega();
  ComplexOneForms<S> a;
  a.n = n;
  a.re.assign(n * n, zero_vec<S>(m));
  a.im.assign(n * n, zero_vec<S>(m));
  for (int k = 0; k < m; ++k) {
    const Vec<S> ek = basis<S>(m, k);
    for (int j = 0; j < n; ++j) {
      const Vec<S> dfj = covariant(p, t, ek, Vec<S>(frame.col(j)));
      for (int i = 0; i < n; ++i) {
        const Vec<S> fi = frame.col(i);
        a.re[i * n + j](k) = bilinear(dfj, s.g, fi);
        a.im[i * n + j](k) = -bilinear(dfj, omega, fi);
      }
    }
  }
  return a;
}

template <class S>
Vec<S> im_trace(const ComplexOneForms<S>& a) {
  Vec<S> out = a.im.empty() ? Vec<S>() : zero_vec<S>(static_cast<int>(a.im[0].size()));
  for (int i = 0; i < a.n; ++i) out += a.imag(i, i);
  return out;
}

template <class S>
Vec<S> im_trace_direct(const AKStructure<S>& s, const Connection<S>& t, const Mat<S>& frame) {
  const auto& p = *s.patch;
  const int m = s.dim();
  const Mat<S> omega = s.omega();
  Vec<S> out = zero_vec<S>(m);
  for (int k = 0; k < m; ++k) {
    const Vec<S> ek = basis<S>(m, k);
    S acc(0);
    for (int i = 0; i < m; ++i) {
      const Vec<S> fi = frame.col(i);
      acc += bilinear(covariant(p, t, ek, fi), omega, fi);
    }
    out(k) = S(Rational(-1, 2)) * acc;
  }
  return out;
}

template <class S>
Mat<S> chern_ricci(const FramedPatch<S>& p, const Vec<S>& im_trace) {
  return -p.d(im_trace);
}

template <class S>
CurvatureTrace<S> chern_ricci_from_curvature(const AKStructure<S>& s, const Connection<S>& t, const Mat<S>& frame) {
  const auto& p = *s.patch;
  const int m = s.dim();
  const Mat<S> omega = s.omega();
  CurvatureTrace<S> out{zeros<S>(m, m), zeros<S>(m, m)};
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Mat<S> r = curvature(p, t, i, j);
      S rho(0), re(0);
      for (int k = 0; k < s.n(); ++k) {
        const Vec<S> fk = frame.col(k);
        const Vec<S> rf = r * fk;
        rho += bilinear(rf, omega, fk);
        re += bilinear(rf, s.g, fk);
      }
      out.rho(i, j) = rho;
      out.rho(j, i) = -rho;
      out.real_trace(i, j) = re;
      out.real_trace(j, i) = -re;
    }
  }
  return out;
}

template <class S>
std::vector<S> leading_minors(const Mat<S>& g) {
  std::vector<S> out;
  for (int k = 1; k <= g.rows(); ++k) out.push_back(determinant(Mat<S>(g.topLeftCorner(k, k))));
  return out;
}

template <class S>
Mat<S> adapt_frame(const AKStructure<S>& s) {
  const int m = s.dim();
  const int n = s.n();
  Mat<S> f = zeros<S>(m, m);
  int chosen = 0;
  for (int cand = 0; cand < m && chosen < n; ++cand) {
    Vec<S> v = basis<S>(m, cand);
    for (int q = 0; q < chosen; ++q) {
      for (int r : {q, n + q}) {
        const Vec<S> fr = f.col(r);
        v -= bilinear(v, s.g, fr) * fr;
      }
    }
    bool all_zero = true;
    for (int i = 0; i < m; ++i) all_zero = all_zero && zero_literal(v(i));
    if (all_zero) continue;
    const S norm = sqrt(bilinear(v, s.g, v));
    const Vec<S> unit = v / norm;
    f.col(chosen) = unit;
    f.col(n + chosen) = s.J * unit;
    ++chosen;
  }
  if (chosen < n) throw std::invalid_argument("could not extend to an adapted frame");
  return f;
}

template <class S>
void check_patch(const FramedPatch<S>& p, Residuals<S>& out) {
  const int m = p.dim();
  add_matrix(out, "coframe times frame is identity", Mat<S>(p.coframe() * p.frame() - identity<S>(m)));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        const Vec<S> ei = basis<S>(m, i), ej = basis<S>(m, j), ek = basis<S>(m, k);
        const Vec<S> jac = p.bracket_frame(ei, p.structure_vector(j, k)) +
                           p.bracket_frame(ej, p.structure_vector(k, i)) +
                           p.bracket_frame(ek, p.structure_vector(i, j));
        add_vector(out, "jacobi identity", jac, label({i, j, k}));
      }
    }
  }
}

template <class S>
void check_structure(const AKStructure<S>& s, const Connection<S>& lc, Residuals<S>& out) {
  const auto& p = *s.patch;
  const int m = s.dim();
  const Mat<S> omega = s.omega();
  add_matrix(out, "g symmetric", Mat<S>(s.g - s.g.transpose()));
  add_matrix(out, "J squared is minus identity", Mat<S>(s.J * s.J + identity<S>(m)));
  add_matrix(out, "g is J-invariant", Mat<S>(s.J.transpose() * s.g * s.J - s.g));
  add_matrix(out, "omega antisymmetric", Mat<S>(omega + omega.transpose()));
  const ThreeForm<S> dw = p.d(omega);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) add_residual(out, "omega closed", label({i, j, k}), dw(i, j, k));

  std::vector<Mat<S>> nabla_j;
  for (int c = 0; c < m; ++c) nabla_j.push_back(covariant_endo(p, lc, basis<S>(m, c), s.J));
  std::vector<Vec<S>> nij(m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) nij[a * m + b] = nijenhuis(s, basis<S>(m, a), basis<S>(m, b));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) {
        // g((nabla_Z J)X, Y) + 1/2 g(N(X,Y), JZ) with X = e_a, Y = e_b, Z = e_c
        const Vec<S> jz = s.J.col(c);
        S v = bilinear(Vec<S>(nabla_j[c].col(a)), s.g, basis<S>(m, b)) +
              S(Rational(1, 2)) * bilinear(nij[a * m + b], s.g, jz);
        add_residual(out, "nabla J and Nijenhuis identity", label({a, b, c}), v);
      }
    }
  }
  for (int a = 0; a < m; ++a) {
    Mat<S> along_j = zeros<S>(m, m);
    for (int c = 0; c < m; ++c) {
      if (!zero_literal(s.J(c, a))) along_j += s.J(c, a) * nabla_j[c];
    }
    add_matrix(out, "nabla along J anticommutes", Mat<S>(along_j + s.J * nabla_j[a]), label({a}));
  }
}

template <class S>
void check_chern(const AKStructure<S>& s, const Connection<S>& lc, const Connection<S>& d, Residuals<S>& out) {
  const auto& p = *s.patch;
  const int m = s.dim();
  for (int i = 0; i < m; ++i) {
    const Mat<S> dg = p.apply(i, s.g) - d.gamma[i].transpose() * s.g - s.g * d.gamma[i];
    add_matrix(out, "chern preserves g", dg, label({i}));
    const Mat<S> dj = p.apply(i, s.J) + d.gamma[i] * s.J - s.J * d.gamma[i];
    add_matrix(out, "chern preserves J", dj, label({i}));
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Vec<S> ei = basis<S>(m, i), ej = basis<S>(m, j);
      add_vector(out, "chern torsion is minus quarter Nijenhuis",
                 Vec<S>(torsion(p, d, i, j) + S(Rational(1, 4)) * nijenhuis(s, ei, ej)), label({i, j}));
      add_vector(out, "levi-civita torsion free", torsion(p, lc, i, j), label({i, j}));
    }
  }
}

template <class S>
void check_adapted(const AKStructure<S>& s, const Mat<S>& frame, Residuals<S>& out) {
  const int m = s.dim();
  const int n = s.n();
  add_matrix(out, "adapted frame orthonormal", Mat<S>(frame.transpose() * s.g * frame - identity<S>(m)));
  for (int i = 0; i < n; ++i) {
    add_vector(out, "adapted frame J-paired", Vec<S>(s.J * frame.col(i) - frame.col(n + i)), label({i}));
  }
}

template <class S>
ChernRicciData<S> chern_ricci_data(const AKStructure<S>& s, const Mat<S>& frame) {
  ChernRicciData<S> out;
  out.lc = levi_civita(s);
  out.chern = chern_connection(s, out.lc);
  out.a = connection_one_form(s, out.chern, frame);
  out.im_trace = im_trace(out.a);
  out.im_trace_direct = im_trace_direct(s, out.chern, frame);
  out.rho = chern_ricci(*s.patch, out.im_trace);
  out.from_curvature = chern_ricci_from_curvature(s, out.chern, frame);
  return out;
}

template <class S>
void check_chern_ricci(const AKStructure<S>& s, const ChernRicciData<S>& data, Residuals<S>& out,
                       const std::string& suffix) {
  const auto& p = *s.patch;
  const int m = s.dim();
  const int n = s.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // A_ji + conj(A_ij) = 0
      add_vector(out, "connection form skew-hermitian" + suffix, Vec<S>(data.a.real(j, i) + data.a.real(i, j)),
                 "re" + label({i, j}));
      add_vector(out, "connection form skew-hermitian" + suffix, Vec<S>(data.a.imag(j, i) - data.a.imag(i, j)),
                 "im" + label({i, j}));
    }
  }
  add_vector(out, "trace routes agree" + suffix, Vec<S>(data.im_trace - data.im_trace_direct));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      add_residual(out, "chern-ricci routes agree" + suffix, label({i, j}),
                   S(data.rho(i, j) - data.from_curvature.rho(i, j)));
      add_residual(out, "curvature trace has no real part" + suffix, label({i, j}),
                   data.from_curvature.real_trace(i, j));
    }
  }
  const ThreeForm<S> drho = p.d(data.from_curvature.rho);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) add_residual(out, "chern-ricci closed" + suffix, label({i, j, k}), drho(i, j, k));
}

#define AKG_INSTANTIATE(S)                                                                                   \
  template AKStructure<S> make_structure(std::shared_ptr<const FramedPatch<S>>, Mat<S>, Mat<S>);           \
  template S bilinear(const Vec<S>&, const Mat<S>&, const Vec<S>&);                                         \
  template Vec<S> nijenhuis(const AKStructure<S>&, const Vec<S>&, const Vec<S>&);                           \
  template Connection<S> levi_civita(const AKStructure<S>&);                                                \
  template Vec<S> covariant(const FramedPatch<S>&, const Connection<S>&, const Vec<S>&, const Vec<S>&);     \
  template Mat<S> covariant_endo(const FramedPatch<S>&, const Connection<S>&, const Vec<S>&, const Mat<S>&); \
  template Connection<S> chern_connection(const AKStructure<S>&, const Connection<S>&);                     \
  template Vec<S> torsion(const FramedPatch<S>&, const Connection<S>&, int, int);                           \
  template Mat<S> curvature(const FramedPatch<S>&, const Connection<S>&, int, int);                         \
  template ComplexOneForms<S> connection_one_form(const AKStructure<S>&, const Connection<S>&, const Mat<S>&); \
  template Vec<S> im_trace(const ComplexOneForms<S>&);                                                      \
  template Vec<S> im_trace_direct(const AKStructure<S>&, const Connection<S>&, const Mat<S>&);              \
  template Mat<S> chern_ricci(const FramedPatch<S>&, const Vec<S>&);                                        \
  template CurvatureTrace<S> chern_ricci_from_curvature(const AKStructure<S>&, const Connection<S>&,         \
                                                        const Mat<S>&);                                     \
  template std::vector<S> leading_minors(const Mat<S>&);                                                    \
  template Mat<S> adapt_frame(const AKStructure<S>&);                                                       \
  template void check_patch(const FramedPatch<S>&, Residuals<S>&);                                          \
  template void check_structure(const AKStructure<S>&, const Connection<S>&, Residuals<S>&);                \
  template void check_chern(const AKStructure<S>&, const Connection<S>&, const Connection<S>&, Residuals<S>&); \
  template void check_adapted(const AKStructure<S>&, const Mat<S>&, Residuals<S>&);                         \
  template ChernRicciData<S> chern_ricci_data(const AKStructure<S>&, const Mat<S>&);                        \
  template void check_chern_ricci(const AKStructure<S>&, const ChernRicciData<S>&, Residuals<S>&,          \
                                  const std::string&);

AKG_INSTANTIATE(Expr)
AKG_INSTANTIATE(Jet)

}  // namespace akg
