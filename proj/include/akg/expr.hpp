#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace akg {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

/// Symbol assignment used for numeric evaluation.
using Point = std::map<std::string, double, std::less<>>;

/// Chart coordinates plus named parameters. Coordinates come first in
/// symbols(); the two name sets are disjoint.
class Context {
 public:
  Context() = default;
  Context(std::vector<std::string> coordinates, std::vector<std::string> parameters);

  const std::vector<std::string>& coordinates() const { return coordinates_; }
  const std::vector<std::string>& parameters() const { return parameters_; }
  std::vector<std::string> symbols() const;
  int dim() const { return static_cast<int>(coordinates_.size()); }

  std::optional<int> coordinate_index(std::string_view name) const;
  bool is_coordinate(std::string_view name) const { return coordinate_index(name).has_value(); }
  bool contains(std::string_view name) const;

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::vector<std::string> coordinates_;
  std::vector<std::string> parameters_;
};

bool is_identifier(std::string_view name);

enum class Func : std::uint8_t { Exp, Ln, Sqrt, Sin, Cos, Sinh, Cosh };

std::string_view func_name(Func f);
std::optional<Func> func_from_name(std::string_view name);

/// Immutable scalar expression tree.
///
/// Trees produced by parse() are raw. Every arithmetic operator and every
/// free function below returns the normal form: a sum of rational multiples
/// of monomials over opaque atoms (symbols, function applications, inverse
/// and fractional powers of sums), with like terms collected.
class Expr {
 public:
  enum class Kind : std::uint8_t { Number, Symbol, Apply, Pow, Mul, Add };

  Expr();
  Expr(int value);  // NOLINT(google-explicit-constructor): Eigen needs Scalar(0)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr symbol(std::string name);

  // Raw (non-normalizing) constructors, used by the parser.
  static Expr raw_add(std::vector<Expr> terms);
  static Expr raw_mul(std::vector<Expr> factors);
  static Expr raw_pow(Expr base, Rational exponent);
  static Expr raw_apply(Func f, Expr arg);

  Kind kind() const;
  bool is_normal() const;
  const Rational& number() const;  // Number value or Pow exponent
  const std::string& name() const;
  Func func() const;
  std::span<const Expr> operands() const;
  long double approx() const;  // Number value as long double

  /// True iff the tree is the literal constant zero.
  bool is_zero_constant() const;
  std::optional<Rational> as_number() const;

  Expr operator-() const;
  Expr& operator+=(const Expr& rhs);
  Expr& operator-=(const Expr& rhs);
  Expr& operator*=(const Expr& rhs);
  Expr& operator/=(const Expr& rhs);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend class ExprBuilder;
};

/// Total structural order on trees (-1, 0, 1).
int compare(const Expr& a, const Expr& b);

Expr normalize(const Expr& e);

Expr pow(const Expr& base, const Rational& exponent);
Expr apply(Func f, const Expr& arg);
inline Expr exp(const Expr& e) { return apply(Func::Exp, e); }
inline Expr ln(const Expr& e) { return apply(Func::Ln, e); }
inline Expr sqrt(const Expr& e) { return apply(Func::Sqrt, e); }
inline Expr sin(const Expr& e) { return apply(Func::Sin, e); }
inline Expr cos(const Expr& e) { return apply(Func::Cos, e); }
inline Expr sinh(const Expr& e) { return apply(Func::Sinh, e); }
inline Expr cosh(const Expr& e) { return apply(Func::Cosh, e); }

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbolError : public std::runtime_error {
 public:
  explicit UnknownSymbolError(std::string symbol);
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

class EvalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parses text into a raw tree; every identifier must belong to ctx.
Expr parse(std::string_view text, const Context& ctx);

/// Partial derivative with respect to a coordinate of ctx, normalized.
Expr differentiate(const Expr& e, std::string_view coordinate, const Context& ctx);

/// IEEE evaluation. Throws EvalError on domain errors or unassigned symbols.
double eval(const Expr& e, const Point& point);

/// Extended-precision evaluation; nullopt on any domain error.
std::optional<long double> try_eval(const Expr& e, const Point& point);

std::string to_string(const Expr& e);

std::set<std::string> symbols_of(const Expr& e);
bool depends_on(const Expr& e, std::string_view symbol);

/// Number of nodes in the tree (shared subtrees counted once per use).
std::size_t tree_size(const Expr& e);

}  // namespace akg
