#pragma once

#include "akg/twist.hpp"

namespace akg {

/// gamma_X = nabla_X psi^-1 for X = e_c, one matrix per frame index.
template <class S>
std::vector<Mat<S>> gammas(const AKStructure<S>& s, const Connection<S>& lc, const TwistMap<S>& t);

/// gamma_X for an arbitrary field, assembled from the per-index table.
template <class S>
Mat<S> gamma(const std::vector<Mat<S>>& table, const Vec<S>& x);

/// The field Q(X, Y) with g(Q(X,Y), Z) = g(psi^-1 gamma_Z X, Y) + g(psi^-1 gamma_Z Y, X).
template <class S>
Vec<S> q_field(const AKStructure<S>& s, const TwistMap<S>& t, const std::vector<Mat<S>>& table, const Vec<S>& x,
               const Vec<S>& y);

/// E(X, Y) from gamma and Q.
template <class S>
Vec<S> e_tensor_formula(const AKStructure<S>& s, const TwistMap<S>& t, const std::vector<Mat<S>>& table,
                        const Vec<S>& x, const Vec<S>& y);

/// E(X, Y) = nabla^h_X Y - nabla^g_X Y from the two Levi-Civita tables.
template <class S>
Vec<S> e_tensor_definition(const Connection<S>& lc_g, const Connection<S>& lc_h, const Vec<S>& x, const Vec<S>& y);

/// The twisted Chern-Ricci 1-form and its two sums, evaluated on the patch
/// frame. `frame` is the g-adapted frame the sums run over.
template <class S>
struct EtaTerms {
  Vec<S> s1;
  Vec<S> s2;
  Vec<S> eta;
  Mat<S> condition_i;                // (i, j): (psi f_i) g(f_j, J psi f_i)
  std::vector<Vec<S>> condition_ii;  // [psi f_i, psi J f_i], i <= n
};

template <class S>
EtaTerms<S> eta_p(const AKStructure<S>& s, const Connection<S>& lc, const TwistMap<S>& t, const Mat<S>& frame);

/// Residuals of one verification run, split by role. `checks` decide the
/// outcome; `conditions` only select the branch; `branch` holds the
/// statements that are claimed when the conditions hold.
template <class S>
struct TheoremResiduals {
  Residuals<S> checks;
  Residuals<S> conditions;
  Residuals<S> branch;
};

template <class S>
struct TheoremData {
  EtaTerms<S> eta;
  AKStructure<S> twisted;
  ChernRicciData<S> base;
  ChernRicciData<S> twisted_data;
  Mat<S> twisted_frame;
};

/// Runs the whole comparison for one twist map: twist-map axioms, twisted
/// structure validation, the E/Q/gamma identities, the eta sums, and the
/// independent Chern-Ricci data of the twisted structure.
template <class S>
TheoremData<S> verify_theorem(const AKStructure<S>& s, const TwistMap<S>& t, const Mat<S>& frame,
                              TheoremResiduals<S>& out);

}  // namespace akg
