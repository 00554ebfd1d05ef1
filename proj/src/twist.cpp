#include "akg/twist.hpp"

#include <cmath>
#include <sstream>

#include "akg/linalg.hpp"

namespace akg {

ExpMode ExpMode::series(int k) {
  if (k < 1) throw std::invalid_argument("series order must be at least 1");
  return {Kind::Series, k};
}

ExpMode ExpMode::parse(const std::string& text) {
  if (text == "structural") return structural();
  if (text == "numeric") return numeric();
  if (text.rfind("series:", 0) == 0) {
    const std::string k = text.substr(7);
    std::size_t used = 0;
    int order = 0;
    try {
      order = std::stoi(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != k.size()) throw std::invalid_argument("bad series order in exp mode '" + text + "'");
    return series(order);
  }
  throw std::invalid_argument("unknown exp mode '" + text + "' (expected structural, series:K or numeric)");
}

std::string ExpMode::to_string() const {
  switch (kind) {
    case Kind::Structural: return "structural";
    case Kind::Series: return "series:" + std::to_string(order);
    case Kind::NumericOnly: return "numeric";
  }
  return "?";
}

template <class S>
Vec<S> hamiltonian_vf(const S& f, const AKStructure<S>& s) {
  // omega(X, e_i) = -df(e_i) reads Omega^T x = -df, i.e. Omega x = df.
  return inverse(Mat<S>(s.omega())) * s.patch->differential(f);
}

template <class S>
Mat<S> lie_derivative_J(const Vec<S>& x, const AKStructure<S>& s) {
  const auto& p = *s.patch;
  const int m = s.dim();
  Mat<S> out(m, m);
  for (int j = 0; j < m; ++j) {
    const Vec<S> ej = basis<S>(m, j);
    out.col(j) = p.bracket(x, Vec<S>(s.J.col(j))) - s.J * p.bracket(x, ej);
  }
  return out;
}

template <class S>
Mat<S> beta(const Vec<S>& x, const AKStructure<S>& s, const Connection<S>& lc) {
  const auto& p = *s.patch;
  const int m = s.dim();
  std::vector<Mat<S>> nabla_j;
  for (int c = 0; c < m; ++c) nabla_j.push_back(covariant_endo(p, lc, basis<S>(m, c), s.J));
  Mat<S> out(m, m);
  for (int a = 0; a < m; ++a) {
    Mat<S> along_j = zeros<S>(m, m);
    for (int c = 0; c < m; ++c) {
      if (!Calculus<S>::is_literal_zero(s.J(c, a))) along_j += s.J(c, a) * nabla_j[c];
    }
    const Vec<S> v = nabla_j[a] * x - s.J * (along_j * x);
    const Vec<S> lowered = s.g.transpose() * v;
    for (int b = 0; b < m; ++b) out(a, b) = lowered(b);
  }
  return out;
}

template <class S>
void check_pre_twist(const Mat<S>& psi_tilde, const Vec<S>& x, const AKStructure<S>& s, const Connection<S>& lc,
                     Residuals<S>& out) {
  add_matrix(out, "psi~ anticommutes with J", Mat<S>(s.J * psi_tilde + psi_tilde * s.J));
  add_matrix(out, "psi~ g-symmetric", Mat<S>(psi_tilde.transpose() * s.g - s.g * psi_tilde));
  add_matrix(out, "beta vanishes", beta(x, s, lc));
}

namespace {

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  mpz_class num = r.get_num(), den = r.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
  mpz_class a, b;
  mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(b.get_mpz_t(), den.get_mpz_t());
  Rational out(a, b);
  out.canonicalize();
  return out;
}

std::optional<Expr> factor_root(const Expr& f) {
  if (f.kind() == Expr::Kind::Pow && f.number().get_den() == 1 && mpz_even_p(f.number().get_num_mpz_t()))
    return pow(f.operands()[0], f.number() / 2);
  if (f.kind() == Expr::Kind::Apply && f.func() == Func::Exp) return exp(f.operands()[0] * Expr(make_rational(1, 2)));
  return std::nullopt;
}

// Square root that is a monomial, when the normal form is visibly one.
// Sign is irrelevant for the uses below (even functions of the root).
std::optional<Expr> monomial_sqrt(const Expr& mu) {
  switch (mu.kind()) {
    case Expr::Kind::Number:
      if (auto r = rational_sqrt(mu.number())) return Expr(*r);
      return std::nullopt;
    case Expr::Kind::Pow:
    case Expr::Kind::Apply: return factor_root(mu);
    case Expr::Kind::Mul: {
      Expr acc(1);
      for (const auto& f : mu.operands()) {
        std::optional<Expr> r =
            f.kind() == Expr::Kind::Number ? monomial_sqrt(f) : factor_root(f);
        if (!r) return std::nullopt;
        acc = acc * *r;
      }
      return acc;
    }
    default: return std::nullopt;
  }
}

std::string block_name(const std::vector<int>& idx) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << "e" << idx[i] + 1;
  os << "}";
  return os.str();
}

}  // namespace

TwistMap<Expr> exp_structural(const Mat<Expr>& psi_tilde, const SamplingConfig& cfg) {
  const int m = static_cast<int>(psi_tilde.rows());
  std::vector<int> comp(m, -1);
  std::vector<std::vector<int>> blocks;
  for (int start = 0; start < m; ++start) {
    if (comp[start] >= 0) continue;
    std::vector<int> stack{start}, members;
    comp[start] = static_cast<int>(blocks.size());
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      members.push_back(i);
      for (int j = 0; j < m; ++j) {
        if (comp[j] >= 0) continue;
        if (!psi_tilde(i, j).is_zero_constant() || !psi_tilde(j, i).is_zero_constant()) {
          comp[j] = comp[start];
          stack.push_back(j);
        }
      }
    }
    std::sort(members.begin(), members.end());
    blocks.push_back(members);
  }

  TwistMap<Expr> out{zeros<Expr>(m, m), zeros<Expr>(m, m), false};
  for (const auto& b : blocks) {
    if (b.size() == 1) {
      const Expr& a = psi_tilde(b[0], b[0]);
      out.psi(b[0], b[0]) = exp(a);
      out.psi_inv(b[0], b[0]) = exp(-a);
      continue;
    }
    if (b.size() > 2) throw StructuralExpError("block " + block_name(b) + " is larger than 2x2");
    Mat<Expr> blk(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) blk(r, c) = psi_tilde(b[r], b[c]);
    const Mat<Expr> sq = blk * blk;
    const Expr mu = sq(0, 0);
    for (const Expr& e : {Expr(sq(1, 1) - mu), sq(0, 1), sq(1, 0)}) {
      if (!holds_zero(is_zero(e, cfg)))
        throw StructuralExpError("block " + block_name(b) + " does not square to a multiple of the identity");
    }
    Expr even, odd;  // exp(M) = even * Id + odd * M
    if (holds_zero(is_zero(mu, cfg))) {
      even = Expr(1);
      odd = Expr(1);
    } else if (auto k = mu.as_number(); k && *k < 0) {
      const Expr nu = monomial_sqrt(Expr(-*k)).value_or(sqrt(Expr(-*k)));
      even = cos(nu);
      odd = sin(nu) / nu;
    } else {
      const Expr nu = monomial_sqrt(mu).value_or(sqrt(mu));
      even = cosh(nu);
      odd = sinh(nu) / nu;
    }
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const Expr diag = r == c ? even : Expr(0);
        out.psi(b[r], b[c]) = diag + odd * blk(r, c);
        out.psi_inv(b[r], b[c]) = diag - odd * blk(r, c);
      }
    }
  }
  return out;
}

template <class S>
TwistMap<S> exp_series(const Mat<S>& psi_tilde, int k) {
  const int m = static_cast<int>(psi_tilde.rows());
  TwistMap<S> out{identity<S>(m), identity<S>(m), true};
  Mat<S> term = identity<S>(m);
  for (int j = 1; j <= k; ++j) {
    term = Mat<S>(term * psi_tilde) * S(Rational(1, j));
    out.psi += term;
    if (j % 2 == 0) {
      out.psi_inv += term;
    } else {
      out.psi_inv -= term;
    }
  }
  return out;
}

namespace {

Mat<Jet> expm(const Mat<Jet>& a) {
  const int m = static_cast<int>(a.rows());
  long double norm = 0;
  for (int j = 0; j < m; ++j) {
    long double col = 0;
    for (int i = 0; i < m; ++i) col += std::fabs(a(i, j).value());
    norm = std::max(norm, col);
  }
  int squarings = 0;
  while (norm > 0.5L) {
    norm /= 2;
    ++squarings;
  }
  const Jet scale(std::ldexp(1.0L, -squarings));
  Mat<Jet> x = a * scale;
  Mat<Jet> sum = identity<Jet>(m);
  Mat<Jet> term = identity<Jet>(m);
  for (int j = 1; j <= 24; ++j) {
    term = Mat<Jet>(term * x) * Jet(1.0L / j);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = Mat<Jet>(sum * sum);
  return sum;
}

}  // namespace

TwistMap<Jet> exp_numeric(const Mat<Jet>& psi_tilde) {
  return TwistMap<Jet>{expm(psi_tilde), expm(Mat<Jet>(-psi_tilde)), false};
}

template <class S>
void check_twist_map(const AKStructure<S>& s, const TwistMap<S>& t, Residuals<S>& out) {
  const int m = s.dim();
  add_matrix(out, "psi times inverse is identity", Mat<S>(t.psi * t.psi_inv - identity<S>(m)));
  add_matrix(out, "inverse times psi is identity", Mat<S>(t.psi_inv * t.psi - identity<S>(m)));
  add_matrix(out, "psi g-symmetric", Mat<S>(t.psi.transpose() * s.g - s.g * t.psi));
  add_matrix(out, "J psi equals psi inverse J", Mat<S>(s.J * t.psi - t.psi_inv * s.J));
}

template <class S>
AKStructure<S> twisted_structure(const AKStructure<S>& s, const TwistMap<S>& t) {
  AKStructure<S> out;
  out.patch = s.patch;
  out.g = t.psi_inv.transpose() * s.g * t.psi_inv;
  out.g_inv = t.psi * s.g_inv * t.psi.transpose();
  out.J = t.psi * s.J * t.psi_inv;
  return out;
}

template <class S>
void check_omega_preserved(const AKStructure<S>& s, const AKStructure<S>& twisted, Residuals<S>& out) {
  add_matrix(out, "twisted omega equals omega", Mat<S>(twisted.omega() - s.omega()));
  add_matrix(out, "twisted metric inverse", Mat<S>(twisted.g * twisted.g_inv - identity<S>(s.dim())));
}

#define AKG_INSTANTIATE(S)                                                                                     \
  template Vec<S> hamiltonian_vf(const S&, const AKStructure<S>&);                                            \
  template Mat<S> lie_derivative_J(const Vec<S>&, const AKStructure<S>&);                                     \
  template Mat<S> beta(const Vec<S>&, const AKStructure<S>&, const Connection<S>&);                           \
  template void check_pre_twist(const Mat<S>&, const Vec<S>&, const AKStructure<S>&, const Connection<S>&,    \
                                Residuals<S>&);                                                               \
  template TwistMap<S> exp_series(const Mat<S>&, int);                                                        \
  template void check_twist_map(const AKStructure<S>&, const TwistMap<S>&, Residuals<S>&);                    \
  template AKStructure<S> twisted_structure(const AKStructure<S>&, const TwistMap<S>&);                       \
  template void check_omega_preserved(const AKStructure<S>&, const AKStructure<S>&, Residuals<S>&);

AKG_INSTANTIATE(Expr)
AKG_INSTANTIATE(Jet)

}  // namespace akg
