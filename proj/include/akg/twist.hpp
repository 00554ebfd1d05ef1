#pragma once

#include <string>

#include "akg/almost_kahler.hpp"
#include "akg/zero_test.hpp"

namespace akg {

/// How exp(psi~) is formed.
struct ExpMode {
  enum class Kind { Structural, Series, NumericOnly };
  Kind kind = Kind::Structural;
  int order = 0;  // Series only

  static ExpMode structural() { return {Kind::Structural, 0}; }
  static ExpMode series(int k);
  static ExpMode numeric() { return {Kind::NumericOnly, 0}; }
  /// "structural", "series:K" or "numeric".
  static ExpMode parse(const std::string& text);
  std::string to_string() const;
};

/// A candidate twist map with its stored inverse. `approximate` is set for
/// truncated series.
template <class S>
struct TwistMap {
  Mat<S> psi;
  Mat<S> psi_inv;
  bool approximate = false;
};

class StructuralExpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// X_f with omega(X_f, .) = -df, solved through the exact inverse of the
/// matrix of omega.
template <class S>
Vec<S> hamiltonian_vf(const S& f, const AKStructure<S>& s);

/// (L_X J) Y = [X, JY] - J [X, Y], evaluated on the frame.
template <class S>
Mat<S> lie_derivative_J(const Vec<S>& x, const AKStructure<S>& s);

/// beta(e_a, e_b) = g((nabla_a J) X, e_b) - g(J (nabla_{J e_a} J) X, e_b).
template <class S>
Mat<S> beta(const Vec<S>& x, const AKStructure<S>& s, const Connection<S>& lc);

/// J psi~ + psi~ J = 0, g-symmetry of psi~, beta = 0.
template <class S>
void check_pre_twist(const Mat<S>& psi_tilde, const Vec<S>& x, const AKStructure<S>& s, const Connection<S>& lc,
                     Residuals<S>& out);

/// Block exponential for matrices that are, up to a simultaneous
/// permutation, block diagonal with 1x1 blocks and 2x2 blocks squaring to a
/// scalar. Throws StructuralExpError naming the first unsupported block.
TwistMap<Expr> exp_structural(const Mat<Expr>& psi_tilde, const SamplingConfig& cfg);

/// Truncated series sum_{m <= k} psi~^m / m! for psi and of -psi~ for the inverse.
template <class S>
TwistMap<S> exp_series(const Mat<S>& psi_tilde, int k);

/// Scaling and squaring on jets.
TwistMap<Jet> exp_numeric(const Mat<Jet>& psi_tilde);

/// psi psi^-1 = Id, g-symmetry, J psi = psi^-1 J.
template <class S>
void check_twist_map(const AKStructure<S>& s, const TwistMap<S>& t, Residuals<S>& out);

/// (g(psi^-1 ., psi^-1 .), psi J psi^-1) on the same patch; the inverse
/// metric is psi g^-1 psi^T.
template <class S>
AKStructure<S> twisted_structure(const AKStructure<S>& s, const TwistMap<S>& t);

/// omega recomputed from the twisted data equals omega.
template <class S>
void check_omega_preserved(const AKStructure<S>& s, const AKStructure<S>& twisted, Residuals<S>& out);

}  // namespace akg
