#pragma once

#include <vector>

#include "akg/expr.hpp"

namespace akg {

/// Monomial bookkeeping for truncated Taylor series in `vars` variables up
/// to total degree `order`. Monomials are stored by increasing degree.
class JetSpace {
 public:
  JetSpace(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  int degree(int idx) const { return degree_[idx]; }
  const std::vector<int>& exponents(int idx) const { return exponents_[idx]; }
  int index_of(const std::vector<int>& exps) const;

  struct ProductTerm {
    int a, b, c;
  };
  /// Grouped by the left factor: terms of a run over [rows[a], rows[a+1]).
  const std::vector<ProductTerm>& products() const { return products_; }
  const std::vector<int>& product_rows() const { return product_rows_; }

  struct PartialTerm {
    int from, to;
    long double factor;
  };
  const std::vector<PartialTerm>& partials(int var) const { return partials_[var]; }

 private:
  int vars_;
  int order_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> degree_;
  std::vector<ProductTerm> products_;
  std::vector<int> product_rows_;
  std::vector<std::vector<PartialTerm>> partials_;
};

/// Truncated multivariate Taylor series around a fixed point. A jet without
/// a space is a plain constant and combines with any other jet.
///
/// Differentiation lowers the number of trustworthy degrees by one; the
/// caller is responsible for not differentiating more than order() times
/// along any chain whose constant term it reads.
class Jet {
 public:
  Jet() : c_(1, 0.0L) {}
  Jet(int v) : c_(1, static_cast<long double>(v)) {}  // NOLINT(google-explicit-constructor)
  Jet(long double v) : c_(1, v) {}                     // NOLINT(google-explicit-constructor)
  Jet(double v) : c_(1, static_cast<long double>(v)) {}  // NOLINT(google-explicit-constructor)
  explicit Jet(const Rational& v)
      : c_(1, static_cast<long double>(v.get_num().get_d()) / static_cast<long double>(v.get_den().get_d())) {}

  static Jet constant(const JetSpace* space, long double v);
  static Jet variable(const JetSpace* space, int var, long double at);

  const JetSpace* space() const { return space_; }
  long double value() const { return c_[0]; }
  /// Every coefficient is exactly zero.
  bool is_zero() const {
    for (long double x : c_)
      if (x != 0) return false;
    return true;
  }
  long double coefficient(int idx) const { return idx < static_cast<int>(c_.size()) ? c_[idx] : 0.0L; }

  Jet partial(int var) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend bool operator==(const Jet& a, const Jet& b) { return a.space_ == b.space_ && a.c_ == b.c_; }

  /// Applies a scalar function given its Taylor coefficients at value():
  /// d[m] = f^(m)(value()) / m!.
  Jet compose(const std::vector<long double>& d) const;

 private:
  void widen(const JetSpace* space);

  const JetSpace* space_ = nullptr;
  std::vector<long double> c_;
};

Jet exp(const Jet& a);
Jet ln(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet pow(const Jet& a, const Rational& exponent);
Jet inverse(const Jet& a);

/// Expands an expression around `at`. Coordinates of ctx become the jet
/// variables (in context order); parameters are frozen at their values.
/// Throws EvalError when the expression is undefined at the point.
Jet taylor_eval(const Expr& e, const Point& at, const Context& ctx, const JetSpace& space);

}  // namespace akg
