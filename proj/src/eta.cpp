#include "akg/eta.hpp"

namespace akg {

template <class S>
std::vector<Mat<S>> gammas(const AKStructure<S>& s, const Connection<S>& lc, const TwistMap<S>& t) {
  std::vector<Mat<S>> out;
  for (int c = 0; c < s.dim(); ++c) out.push_back(covariant_endo(*s.patch, lc, basis<S>(s.dim(), c), t.psi_inv));
  return out;
}

template <class S>
Mat<S> gamma(const std::vector<Mat<S>>& table, const Vec<S>& x) {
  const int m = static_cast<int>(x.size());
  Mat<S> out = zeros<S>(m, m);
  for (int c = 0; c < m; ++c) {
    if (!Calculus<S>::is_literal_zero(x(c))) out += x(c) * table[c];
  }
  return out;
}

template <class S>
Vec<S> q_field(const AKStructure<S>& s, const TwistMap<S>& t, const std::vector<Mat<S>>& table, const Vec<S>& x,
               const Vec<S>& y) {
  const int m = s.dim();
  Vec<S> z(m);
  for (int c = 0; c < m; ++c) {
    const Mat<S> pg = t.psi_inv * table[c];
    z(c) = bilinear(Vec<S>(pg * x), s.g, y) + bilinear(Vec<S>(pg * y), s.g, x);
  }
  return s.g_inv * z;
}

template <class S>
Vec<S> e_tensor_formula(const AKStructure<S>& s, const TwistMap<S>& t, const std::vector<Mat<S>>& table,
                        const Vec<S>& x, const Vec<S>& y) {
  const Mat<S> gx = gamma(table, x);
  const Mat<S> gy = gamma(table, y);
  const Vec<S> inner = gx * y + gy * x + t.psi * (gx * (t.psi_inv * y)) + t.psi * (gy * (t.psi_inv * x)) -
                       t.psi * q_field(s, t, table, x, y);
  return S(Rational(1, 2)) * (t.psi * inner);
}

template <class S>
Vec<S> e_tensor_definition(const Connection<S>& lc_g, const Connection<S>& lc_h, const Vec<S>& x, const Vec<S>& y) {
  Vec<S> out = zero_vec<S>(static_cast<int>(y.size()));
  for (int i = 0; i < x.size(); ++i) {
    if (Calculus<S>::is_literal_zero(x(i))) continue;
    out += x(i) * Vec<S>((lc_h.gamma[i] - lc_g.gamma[i]) * y);
  }
  return out;
}

template <class S>
EtaTerms<S> eta_p(const AKStructure<S>& s, const Connection<S>& lc, const TwistMap<S>& t, const Mat<S>& frame) {
  const auto& p = *s.patch;
  const int m = s.dim();
  const int n = s.n();
  const Mat<S> psi_inv2 = t.psi_inv * t.psi_inv;
  const Mat<S> j_psi_inv = s.J * t.psi_inv;
  const Mat<S> j_psi = s.J * t.psi;
  const Mat<S> psi_f = t.psi * frame;  // columns psi f_i
  const S half(Rational(-1, 2));

  EtaTerms<S> out{zero_vec<S>(m), zero_vec<S>(m), zero_vec<S>(m), zeros<S>(m, m), {}};
  for (int j = 0; j < m; ++j) {
    const Vec<S> ej = basis<S>(m, j);
    const Vec<S> w = psi_inv2.col(j);
    S s1(0), s2(0);
    for (int i = 0; i < m; ++i) {
      const Vec<S> fi = frame.col(i);
      const Vec<S> pfi = psi_f.col(i);
      s1 += bilinear(Vec<S>(j_psi_inv * p.bracket(ej, pfi)), s.g, fi);
      s2 += bilinear(Vec<S>(j_psi * covariant(p, lc, pfi, w)), s.g, fi);
    }
    out.s1(j) = half * s1;
    out.s2(j) = half * s2;
    out.eta(j) = out.s1(j) + out.s2(j);
  }
  for (int i = 0; i < m; ++i) {
    const Vec<S> pfi = psi_f.col(i);
    const Vec<S> jpfi = s.J * pfi;
    for (int j = 0; j < m; ++j) out.condition_i(i, j) = p.apply(pfi, bilinear(Vec<S>(frame.col(j)), s.g, jpfi));
  }
  for (int i = 0; i < n; ++i) {
    out.condition_ii.push_back(p.bracket(Vec<S>(psi_f.col(i)), Vec<S>(t.psi * (s.J * frame.col(i)))));
  }
  return out;
}

namespace {

template <class S>
void append_prefixed(Residuals<S>& out, const Residuals<S>& in, const std::string& prefix) {
  for (const auto& r : in) out.push_back({prefix + r.check, r.component, r.value});
}

}  // namespace

template <class S>
TheoremData<S> verify_theorem(const AKStructure<S>& s, const TwistMap<S>& t, const Mat<S>& frame,
                              TheoremResiduals<S>& out) {
  const auto& p = *s.patch;
  const int m = s.dim();
  TheoremData<S> d;
  check_adapted(s, frame, out.checks);
  check_twist_map(s, t, out.checks);

  d.base = chern_ricci_data(s, frame);
  const Connection<S>& lc = d.base.lc;
  d.twisted = twisted_structure(s, t);
  check_omega_preserved(s, d.twisted, out.checks);
  d.twisted_frame = t.psi * frame;
  d.twisted_data = chern_ricci_data(d.twisted, d.twisted_frame);

  Residuals<S> tw;
  check_structure(d.twisted, d.twisted_data.lc, tw);
  check_chern(d.twisted, d.twisted_data.lc, d.twisted_data.chern, tw);
  check_adapted(d.twisted, d.twisted_frame, tw);
  check_chern_ricci(d.twisted, d.twisted_data, tw);
  append_prefixed(out.checks, tw, "twisted ");

  const std::vector<Mat<S>> table = gammas(s, lc, t);
  for (int c = 0; c < m; ++c) {
    add_matrix(out.checks, "gamma g-symmetric", Mat<S>(table[c].transpose() * s.g - s.g * table[c]), label({c}));
  }
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const Vec<S> ea = basis<S>(m, a), eb = basis<S>(m, b);
      if (a < b) {
        add_vector(out.checks, "Q symmetric", Vec<S>(q_field(s, t, table, ea, eb) - q_field(s, t, table, eb, ea)),
                   label({a, b}));
        add_vector(out.checks, "E symmetric",
                   Vec<S>(e_tensor_definition(lc, d.twisted_data.lc, ea, eb) -
                          e_tensor_definition(lc, d.twisted_data.lc, eb, ea)),
                   label({a, b}));
      }
      add_vector(out.checks, "E routes agree",
                 Vec<S>(e_tensor_formula(s, t, table, ea, eb) - e_tensor_definition(lc, d.twisted_data.lc, ea, eb)),
                 label({a, b}));
    }
  }

  d.eta = eta_p(s, lc, t, frame);
  add_vector(out.checks, "eta equals imaginary trace", Vec<S>(d.eta.eta - d.twisted_data.im_trace));
  const Mat<S> d_eta = p.d(d.eta.eta);
  const Mat<S> shadow = d.base.from_curvature.rho - d.twisted_data.from_curvature.rho +
                        p.d(Vec<S>(d.base.im_trace - d.eta.eta));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      add_residual(out.checks, "twisted chern-ricci equals minus d eta", label({i, j}),
                   S(d.twisted_data.from_curvature.rho(i, j) + d_eta(i, j)));
      add_residual(out.checks, "chern-ricci forms differ by an exact form", label({i, j}), shadow(i, j));
    }
  }

  add_matrix(out.conditions, "condition (i)", d.eta.condition_i);
  for (int i = 0; i < s.n(); ++i) add_vector(out.conditions, "condition (ii)", d.eta.condition_ii[i], label({i}));
  add_vector(out.branch, "S2 vanishes", d.eta.s2);
  add_vector(out.branch, "eta equals S1", Vec<S>(d.eta.eta - d.eta.s1));
  return d;
}

#define AKG_INSTANTIATE(S)                                                                                      \
  template std::vector<Mat<S>> gammas(const AKStructure<S>&, const Connection<S>&, const TwistMap<S>&);        \
  template Mat<S> gamma(const std::vector<Mat<S>>&, const Vec<S>&);                                            \
  template Vec<S> q_field(const AKStructure<S>&, const TwistMap<S>&, const std::vector<Mat<S>>&, const Vec<S>&, \
                          const Vec<S>&);                                                                      \
  template Vec<S> e_tensor_formula(const AKStructure<S>&, const TwistMap<S>&, const std::vector<Mat<S>>&,      \
                                   const Vec<S>&, const Vec<S>&);                                              \
  template Vec<S> e_tensor_definition(const Connection<S>&, const Connection<S>&, const Vec<S>&, const Vec<S>&); \
  template EtaTerms<S> eta_p(const AKStructure<S>&, const Connection<S>&, const TwistMap<S>&, const Mat<S>&);   \
  template TheoremData<S> verify_theorem(const AKStructure<S>&, const TwistMap<S>&, const Mat<S>&,            \
                                         TheoremResiduals<S>&);

AKG_INSTANTIATE(Expr)
AKG_INSTANTIATE(Jet)

}  // namespace akg
