#pragma once

#include <vector>

#include "akg/scalar.hpp"

namespace akg {

/// Components of a 3-form on frame triples, stored densely.
template <class S>
struct ThreeForm {
  int dim = 0;
  std::vector<S> c;
  const S& operator()(int i, int j, int k) const { return c[(i * dim + j) * dim + k]; }
  S& operator()(int i, int j, int k) { return c[(i * dim + j) * dim + k]; }
};

/// A single coordinate chart with a global frame. Column j of frame() holds
/// the coordinate components of e_j; row i of coframe() holds theta^i in the
/// dx basis. Vector fields and forms elsewhere are in frame components
/// unless a name says otherwise.
template <class S>
class FramedPatch {
 public:
  FramedPatch(Calculus<S> calc, Mat<S> frame);
  /// Uses a precomputed coframe (skips the inverse).
  FramedPatch(Calculus<S> calc, Mat<S> frame, Mat<S> coframe);

  int dim() const { return static_cast<int>(frame_.cols()); }
  const Calculus<S>& calculus() const { return calc_; }
  const Mat<S>& frame() const { return frame_; }
  const Mat<S>& coframe() const { return coframe_; }

  /// c^k_{ij} with [e_i, e_j] = sum_k c^k_{ij} e_k.
  const S& structure(int k, int i, int j) const { return c_[(k * dim() + i) * dim() + j]; }
  /// Frame components of [e_i, e_j].
  Vec<S> structure_vector(int i, int j) const;

  S partial(const S& f, int coord) const { return calc_.partial(f, coord); }
  /// e_i(f).
  S apply(int i, const S& f) const;
  /// X(f) for X in frame components.
  S apply(const Vec<S>& x, const S& f) const;
  /// Componentwise X(Y^k).
  Vec<S> apply(const Vec<S>& x, const Vec<S>& y) const;
  Mat<S> apply(int i, const Mat<S>& m) const;

  Vec<S> to_coordinates(const Vec<S>& x) const { return frame_ * x; }
  Vec<S> from_coordinates(const Vec<S>& x) const { return coframe_ * x; }

  /// Coordinate-basis bracket of coordinate-component fields.
  Vec<S> bracket_coordinates(const Vec<S>& x, const Vec<S>& y) const;
  /// Bracket of frame-component fields through the coordinate formula.
  Vec<S> bracket(const Vec<S>& x, const Vec<S>& y) const;
  /// Bracket of frame-component fields through the structure functions.
  Vec<S> bracket_frame(const Vec<S>& x, const Vec<S>& y) const;

  /// d of a 1-form given on the frame; result is the antisymmetric matrix
  /// of values on frame pairs.
  Mat<S> d(const Vec<S>& alpha) const;
  /// d of a 2-form given as an antisymmetric matrix.
  ThreeForm<S> d(const Mat<S>& beta) const;
  /// The 1-form df.
  Vec<S> differential(const S& f) const;

 private:
  void compute_structure();

  Calculus<S> calc_;
  Mat<S> frame_;
  Mat<S> coframe_;
  std::vector<S> c_;
};

extern template class FramedPatch<Expr>;
extern template class FramedPatch<Jet>;

}  // namespace akg
