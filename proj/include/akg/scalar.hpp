#pragma once

#include <Eigen/Core>

#include "akg/expr.hpp"
#include "akg/jet.hpp"

namespace Eigen {

template <>
struct NumTraits<akg::Expr> : GenericNumTraits<akg::Expr> {
  using Real = akg::Expr;
  using NonInteger = akg::Expr;
  using Literal = akg::Expr;
  using Nested = akg::Expr;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 20,
    MulCost = 40
  };
  static int digits10() { return 0; }
};

template <>
struct NumTraits<akg::Jet> : GenericNumTraits<akg::Jet> {
  using Real = akg::Jet;
  using NonInteger = akg::Jet;
  using Literal = akg::Jet;
  using Nested = akg::Jet;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 10,
    MulCost = 40
  };
  static int digits10() { return 18; }
};

}  // namespace Eigen

namespace akg {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Partial derivatives by coordinate index, for each scalar type.
template <class S>
struct Calculus;

template <>
struct Calculus<Expr> {
  Context ctx;
  Expr partial(const Expr& e, int k) const {
    if (e.kind() == Expr::Kind::Number) return Expr(0);
    return differentiate(e, ctx.coordinates()[k], ctx);
  }
  static bool is_literal_zero(const Expr& e) { return e.is_zero_constant(); }
};

template <>
struct Calculus<Jet> {
  Jet partial(const Jet& e, int k) const { return e.partial(k); }
  static bool is_literal_zero(const Jet& e) { return e.is_zero(); }
};

template <class S>
Mat<S> identity(int n) {
  Mat<S> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = S(i == j ? 1 : 0);
  return m;
}

template <class S>
Mat<S> zeros(int rows, int cols) {
  Mat<S> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = S(0);
  return m;
}

template <class S>
Vec<S> zero_vec(int n) {
  Vec<S> v(n);
  for (int i = 0; i < n; ++i) v(i) = S(0);
  return v;
}

template <class S>
Vec<S> basis(int n, int i) {
  Vec<S> v = zero_vec<S>(n);
  v(i) = S(1);
  return v;
}

/// Converts a matrix of expressions to jets expanded around `at`.
Mat<Jet> to_jets(const Mat<Expr>& m, const Point& at, const Context& ctx, const JetSpace& space);

}  // namespace akg
