#include "akg/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <utility>

namespace akg {

struct Expr::Node {
  Kind kind = Kind::Number;
  bool normal = false;
  Rational value;
  long double approx = 0;
  std::string name;
  Func func = Func::Exp;
  std::vector<Expr> ops;
};

class ExprBuilder {
 public:
  static Expr make(Expr::Node n) { return Expr(std::make_shared<const Expr::Node>(std::move(n))); }
  static const Expr::Node& node(const Expr& e) { return *e.node_; }
  static bool same(const Expr& a, const Expr& b) { return a.node_ == b.node_; }
};

namespace {

using Node = Expr::Node;
using Kind = Expr::Kind;

const Node& node(const Expr& e) { return ExprBuilder::node(e); }

Expr make_number(const Rational& v) {
  Node n;
  n.kind = Kind::Number;
  n.normal = true;
  n.value = v;
  n.approx = static_cast<long double>(v.get_num().get_d()) /
             static_cast<long double>(v.get_den().get_d());
  if (!std::isfinite(static_cast<double>(n.approx))) n.approx = static_cast<long double>(v.get_d());
  return ExprBuilder::make(std::move(n));
}

const Expr& zero_expr() {
  static const Expr z = make_number(Rational(0));
  return z;
}

const Expr& one_expr() {
  static const Expr o = make_number(Rational(1));
  return o;
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

int func_rank(Func f) {
  // Alphabetical, so products print as cosh(a)*sinh(a).
  switch (f) {
    case Func::Cos: return 0;
    case Func::Cosh: return 1;
    case Func::Exp: return 2;
    case Func::Ln: return 3;
    case Func::Sin: return 4;
    case Func::Sinh: return 5;
    case Func::Sqrt: return 6;
  }
  return 7;
}

int sgn(int v) { return (v > 0) - (v < 0); }

}  // namespace

// ---------------------------------------------------------------------------
// Context

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  if (!alpha(name[0])) return false;
  return std::all_of(name.begin() + 1, name.end(), [&](char c) {
    return alpha(c) || std::isdigit(static_cast<unsigned char>(c));
  });
}

Context::Context(std::vector<std::string> coordinates, std::vector<std::string> parameters)
    : coordinates_(std::move(coordinates)), parameters_(std::move(parameters)) {
  std::set<std::string> seen;
  for (const auto* list : {&coordinates_, &parameters_}) {
    for (const auto& name : *list) {
      if (!is_identifier(name)) throw std::invalid_argument("invalid symbol name '" + name + "'");
      if (func_from_name(name)) throw std::invalid_argument("symbol name '" + name + "' is a function name");
      if (!seen.insert(name).second) throw std::invalid_argument("duplicate symbol '" + name + "'");
    }
  }
}

std::vector<std::string> Context::symbols() const {
  std::vector<std::string> all = coordinates_;
  all.insert(all.end(), parameters_.begin(), parameters_.end());
  return all;
}

std::optional<int> Context::coordinate_index(std::string_view name) const {
  for (std::size_t i = 0; i < coordinates_.size(); ++i) {
    if (coordinates_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool Context::contains(std::string_view name) const {
  return is_coordinate(name) ||
         std::find(parameters_.begin(), parameters_.end(), name) != parameters_.end();
}

std::string_view func_name(Func f) {
  switch (f) {
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sqrt: return "sqrt";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
  }
  return "?";
}

std::optional<Func> func_from_name(std::string_view name) {
  for (Func f : {Func::Exp, Func::Ln, Func::Sqrt, Func::Sin, Func::Cos, Func::Sinh, Func::Cosh}) {
    if (func_name(f) == name) return f;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expr basics

Expr::Expr() : Expr(zero_expr()) {}

Expr::Expr(int value) : Expr(value == 0 ? zero_expr() : value == 1 ? one_expr() : make_number(Rational(value))) {}

Expr::Expr(const Rational& value) : Expr(make_number(value)) {}

Expr Expr::symbol(std::string name) {
  Node n;
  n.kind = Kind::Symbol;
  n.normal = true;
  n.name = std::move(name);
  return ExprBuilder::make(std::move(n));
}

Expr Expr::raw_add(std::vector<Expr> terms) {
  if (terms.size() == 1) return terms.front();
  Node n;
  n.kind = Kind::Add;
  n.ops = std::move(terms);
  return ExprBuilder::make(std::move(n));
}

Expr Expr::raw_mul(std::vector<Expr> factors) {
  if (factors.size() == 1) return factors.front();
  Node n;
  n.kind = Kind::Mul;
  n.ops = std::move(factors);
  return ExprBuilder::make(std::move(n));
}

Expr Expr::raw_pow(Expr base, Rational exponent) {
  Node n;
  n.kind = Kind::Pow;
  n.value = std::move(exponent);
  n.approx = static_cast<long double>(n.value.get_d());
  n.ops = {std::move(base)};
  return ExprBuilder::make(std::move(n));
}

Expr Expr::raw_apply(Func f, Expr arg) {
  Node n;
  n.kind = Kind::Apply;
  n.func = f;
  n.ops = {std::move(arg)};
  return ExprBuilder::make(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
bool Expr::is_normal() const { return node_->normal; }
const Rational& Expr::number() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Func Expr::func() const { return node_->func; }
std::span<const Expr> Expr::operands() const { return node_->ops; }
long double Expr::approx() const { return node_->approx; }

bool Expr::is_zero_constant() const { return node_->kind == Kind::Number && node_->value == 0; }

std::optional<Rational> Expr::as_number() const {
  if (node_->kind == Kind::Number) return node_->value;
  return std::nullopt;
}

int compare(const Expr& a, const Expr& b) {
  if (ExprBuilder::same(a, b)) return 0;
  const Node& x = node(a);
  const Node& y = node(b);
  if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind) ? -1 : 1;
  switch (x.kind) {
    case Kind::Number: return sgn(cmp(x.value, y.value));
    case Kind::Symbol: return sgn(x.name.compare(y.name));
    case Kind::Apply:
      if (x.func != y.func) return func_rank(x.func) < func_rank(y.func) ? -1 : 1;
      return compare(x.ops[0], y.ops[0]);
    case Kind::Pow: {
      int c = compare(x.ops[0], y.ops[0]);
      if (c != 0) return c;
      return sgn(cmp(x.value, y.value));
    }
    case Kind::Mul:
    case Kind::Add: {
      std::size_t n = std::min(x.ops.size(), y.ops.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(x.ops[i], y.ops[i]);
        if (c != 0) return c;
      }
      if (x.ops.size() == y.ops.size()) return 0;
      return x.ops.size() < y.ops.size() ? -1 : 1;
    }
  }
  return 0;
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// Polynomial normal form

namespace {

struct Factor {
  Expr atom;
  int exp;
};
using Monomial = std::vector<Factor>;

// Atoms ascending; on equal atoms higher exponent first; a proper prefix sorts
// after its extensions so constants come last.
int compare_mono(const Monomial& a, const Monomial& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i].atom, b[i].atom);
    if (c != 0) return c;
    if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() > b.size() ? -1 : 1;
}

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare_mono(a, b) < 0; }
};

using Poly = std::map<Monomial, Rational, MonoLess>;

Poly poly_of(const Expr& e, bool trust);
Expr to_expr(const Poly& p);
Poly mul(const Poly& a, const Poly& b);
Poly pow_int(const Poly& b, long n);
Poly frac_atom(const Poly& b, const Rational& f);
Poly make_apply(Func f, const Poly& arg);

Expr normal_node(Node n) {
  n.normal = true;
  return ExprBuilder::make(std::move(n));
}

Poly constant(const Rational& c) {
  Poly p;
  if (c != 0) p.emplace(Monomial{}, c);
  return p;
}

void add_into(Poly& acc, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = acc.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) acc.erase(it);
  }
}

Poly add(Poly a, const Poly& b, const Rational& scale = Rational(1)) {
  for (const auto& [m, c] : b) add_into(a, m, c * scale);
  return a;
}

Poly scale(const Poly& a, const Rational& s) {
  if (s == 0) return {};
  Poly r;
  for (const auto& [m, c] : a) r.emplace_hint(r.end(), m, c * s);
  return r;
}

bool is_constant(const Poly& p, Rational* value = nullptr) {
  if (p.empty()) {
    if (value) *value = 0;
    return true;
  }
  if (p.size() == 1 && p.begin()->first.empty()) {
    if (value) *value = p.begin()->second;
    return true;
  }
  return false;
}

bool is_exp_atom(const Expr& a) { return a.kind() == Kind::Apply && a.func() == Func::Exp; }

// Fractional atoms: sqrt(b) and b^r with r in (0,1).
bool frac_parts(const Expr& a, Expr* base, Rational* r) {
  if (a.kind() == Kind::Apply && a.func() == Func::Sqrt) {
    *base = a.operands()[0];
    *r = Rational(1, 2);
    return true;
  }
  if (a.kind() == Kind::Pow && !is_integer(a.number())) {
    *base = a.operands()[0];
    *r = a.number();
    return true;
  }
  return false;
}

// sinh(a)^k and sin(a)^k with k >= 2 are reduced through cosh^2 - sinh^2 = 1
// and cos^2 + sin^2 = 1, leaving the odd function with degree at most one.
bool is_pythagorean(const Factor& f) {
  return f.exp >= 2 && f.atom.kind() == Kind::Apply && (f.atom.func() == Func::Sinh || f.atom.func() == Func::Sin);
}

bool needs_canon(const Monomial& m) {
  int exps = 0;
  for (const auto& f : m) {
    if (is_pythagorean(f)) return true;
    if (is_exp_atom(f.atom)) {
      if (f.exp != 1 || ++exps > 1) return true;
    } else if (f.exp != 1) {
      Expr b;
      Rational r;
      if (frac_parts(f.atom, &b, &r)) return true;
    }
  }
  return false;
}

Poly make_exp(const Poly& arg);

// Merges exp atoms and reduces powers of fractional atoms.
Poly canonicalize(Monomial m) {
  if (!needs_canon(m)) return Poly{{std::move(m), Rational(1)}};
  Monomial rest;
  Poly exp_arg;
  bool has_exp = false;
  Poly extra = constant(1);
  for (auto& f : m) {
    if (is_exp_atom(f.atom)) {
      exp_arg = add(std::move(exp_arg), poly_of(f.atom.operands()[0], true), Rational(f.exp));
      has_exp = true;
      continue;
    }
    if (is_pythagorean(f)) {
      const bool hyperbolic = f.atom.func() == Func::Sinh;
      const Poly even = make_apply(hyperbolic ? Func::Cosh : Func::Cos, poly_of(f.atom.operands()[0], true));
      // sinh^2 = cosh^2 - 1, sin^2 = 1 - cos^2
      const Poly square = add(mul(even, even), constant(-1), Rational(1));
      extra = mul(extra, pow_int(hyperbolic ? square : scale(square, -1), f.exp / 2));
      if (f.exp % 2 == 1) rest.push_back({f.atom, 1});
      continue;
    }
    Expr base;
    Rational r;
    if (f.exp != 1 && frac_parts(f.atom, &base, &r)) {
      Rational t = r * f.exp;
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
      Rational frac = t - Rational(fl);
      Poly bp = poly_of(base, true);
      extra = mul(extra, pow_int(bp, fl.get_si()));
      if (frac != 0) extra = mul(extra, frac_atom(bp, frac));
      continue;
    }
    rest.push_back(std::move(f));
  }
  Poly result{{std::move(rest), Rational(1)}};
  if (has_exp) result = mul(result, make_exp(exp_arg));
  return mul(result, extra);
}

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = compare(a[i].atom, b[j].atom);
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back(b[j++]);
    } else {
      int e = a[i].exp + b[j].exp;
      if (e != 0) out.push_back({a[i].atom, e});
      ++i;
      ++j;
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return out;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r;
  if (a.empty() || b.empty()) return r;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m = merge(ma, mb);
      Rational c = ca * cb;
      if (needs_canon(m)) {
        for (const auto& [mm, cc] : canonicalize(std::move(m))) add_into(r, mm, cc * c);
      } else {
        add_into(r, m, c);
      }
    }
  }
  return r;
}

Poly atom_poly(const Expr& atom, int k = 1) { return canonicalize(Monomial{{atom, k}}); }

Rational rational_pow(const Rational& base, long n) {
  mpz_class num, den;
  unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational r = n < 0 ? Rational(den, num) : Rational(num, den);
  r.canonicalize();
  return r;
}

Poly invert_monomial(const Monomial& m) {
  Monomial inv = m;
  for (auto& f : inv) f.exp = -f.exp;
  return canonicalize(std::move(inv));
}

Poly pow_int(const Poly& b, long n) {
  if (n == 0) return constant(1);
  if (n > 0) {
    Poly result = constant(1);
    Poly base = b;
    while (n > 0) {
      if (n & 1) result = mul(result, base);
      n >>= 1;
      if (n > 0) base = mul(base, base);
    }
    return result;
  }
  if (b.empty()) throw EvalError("division by zero");
  if (b.size() == 1) {
    const auto& [m, c] = *b.begin();
    return scale(pow_int(invert_monomial(m), -n), rational_pow(c, n));
  }
  const Rational lead = b.begin()->second;
  Poly monic = scale(b, 1 / lead);
  Node inv;
  inv.kind = Kind::Pow;
  inv.value = Rational(-1);
  inv.approx = -1;
  inv.ops = {to_expr(monic)};
  Expr atom = normal_node(std::move(inv));
  return scale(atom_poly(atom, static_cast<int>(-n)), rational_pow(lead, n));
}

std::optional<mpz_class> exact_root(const mpz_class& v, unsigned long q) {
  if (v < 0) {
    if (q % 2 == 0) return std::nullopt;
    auto r = exact_root(-v, q);
    if (!r) return std::nullopt;
    return mpz_class(-*r);
  }
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), q) != 0) return r;
  return std::nullopt;
}

Poly frac_atom(const Poly& b, const Rational& f) {
  if (b.empty()) return {};
  Rational c;
  const unsigned long q = f.get_den().get_ui();
  const long p = f.get_num().get_si();
  if (is_constant(b, &c)) {
    auto rn = exact_root(c.get_num(), q);
    auto rd = exact_root(c.get_den(), q);
    if (rn && rd) {
      Rational root(*rn, *rd);
      root.canonicalize();
      return constant(rational_pow(root, p));
    }
  }
  if (b.size() == 1 && b.begin()->second == 1 && b.begin()->first.size() == 1 &&
      is_exp_atom(b.begin()->first[0].atom) && b.begin()->first[0].exp == 1) {
    return make_exp(scale(poly_of(b.begin()->first[0].atom.operands()[0], true), f));
  }
  Expr base = to_expr(b);
  Node n;
  if (f == Rational(1, 2)) {
    n.kind = Kind::Apply;
    n.func = Func::Sqrt;
    n.ops = {base};
  } else {
    n.kind = Kind::Pow;
    n.value = f;
    n.approx = static_cast<long double>(f.get_d());
    n.ops = {base};
  }
  return Poly{{Monomial{{normal_node(std::move(n)), 1}}, Rational(1)}};
}

Poly frac_power(const Poly& b, const Rational& r) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  Rational frac = r - Rational(fl);
  return mul(pow_int(b, fl.get_si()), frac_atom(b, frac));
}

Poly apply_atom(Func f, const Poly& arg) {
  Node n;
  n.kind = Kind::Apply;
  n.func = f;
  n.ops = {to_expr(arg)};
  return Poly{{Monomial{{normal_node(std::move(n)), 1}}, Rational(1)}};
}

bool single_atom(const Poly& p, Func f, Expr* arg) {
  if (p.size() != 1 || p.begin()->second != 1) return false;
  const Monomial& m = p.begin()->first;
  if (m.size() != 1 || m[0].exp != 1) return false;
  const Expr& a = m[0].atom;
  if (a.kind() != Kind::Apply || a.func() != f) return false;
  *arg = a.operands()[0];
  return true;
}

Poly make_exp(const Poly& arg) {
  if (arg.empty()) return constant(1);
  Expr inner;
  if (single_atom(arg, Func::Ln, &inner)) return poly_of(inner, true);
  return apply_atom(Func::Exp, arg);
}

bool leading_negative(const Poly& p) { return !p.empty() && p.begin()->second < 0; }

Poly make_apply(Func f, const Poly& arg) {
  Expr inner;
  switch (f) {
    case Func::Exp: return make_exp(arg);
    case Func::Ln: {
      Rational c;
      if (is_constant(arg, &c) && c == 1) return {};
      if (single_atom(arg, Func::Exp, &inner)) return poly_of(inner, true);
      return apply_atom(f, arg);
    }
    case Func::Sqrt: return frac_atom(arg, Rational(1, 2));
    case Func::Sin:
    case Func::Sinh:
      if (arg.empty()) return {};
      if (leading_negative(arg)) return scale(apply_atom(f, scale(arg, -1)), -1);
      return apply_atom(f, arg);
    case Func::Cos:
    case Func::Cosh:
      if (arg.empty()) return constant(1);
      if (leading_negative(arg)) return apply_atom(f, scale(arg, -1));
      return apply_atom(f, arg);
  }
  return {};
}

// Reads a tree already in normal form.
Factor read_factor(const Expr& e) {
  if (e.kind() == Kind::Pow && is_integer(e.number()) && e.operands()[0].kind() != Kind::Add) {
    return {e.operands()[0], static_cast<int>(e.number().get_num().get_si())};
  }
  return {e, 1};
}

void read_term(const Expr& t, Poly& out) {
  Rational c(1);
  Monomial m;
  if (t.kind() == Kind::Number) {
    add_into(out, m, t.number());
    return;
  }
  if (t.kind() == Kind::Mul) {
    for (const Expr& f : t.operands()) {
      if (f.kind() == Kind::Number) {
        c *= f.number();
      } else {
        m.push_back(read_factor(f));
      }
    }
  } else {
    m.push_back(read_factor(t));
  }
  out.emplace_hint(out.end(), std::move(m), c);
}

Poly read_normal(const Expr& e) {
  Poly p;
  if (e.kind() == Kind::Add) {
    for (const Expr& t : e.operands()) read_term(t, p);
  } else {
    read_term(e, p);
  }
  return p;
}

Poly poly_of(const Expr& e, bool trust) {
  if (trust && e.is_normal()) return read_normal(e);
  switch (e.kind()) {
    case Kind::Number: return constant(e.number());
    case Kind::Symbol: return Poly{{Monomial{{e, 1}}, Rational(1)}};
    case Kind::Add: {
      Poly r;
      for (const Expr& t : e.operands()) r = add(std::move(r), poly_of(t, trust));
      return r;
    }
    case Kind::Mul: {
      Poly r = constant(1);
      for (const Expr& f : e.operands()) {
        r = mul(r, poly_of(f, trust));
        if (r.empty()) break;
      }
      return r;
    }
    case Kind::Pow: {
      Poly b = poly_of(e.operands()[0], trust);
      if (is_integer(e.number())) return pow_int(b, e.number().get_num().get_si());
      return frac_power(b, e.number());
    }
    case Kind::Apply: return make_apply(e.func(), poly_of(e.operands()[0], trust));
  }
  return {};
}

Expr term_expr(const Monomial& m, const Rational& c) {
  if (m.empty()) return Expr(c);
  std::vector<Expr> ops;
  ops.reserve(m.size() + 1);
  if (c != 1) ops.push_back(Expr(c));
  for (const auto& f : m) {
    if (f.exp == 1) {
      ops.push_back(f.atom);
    } else {
      Node n;
      n.kind = Kind::Pow;
      n.value = Rational(f.exp);
      n.approx = f.exp;
      n.ops = {f.atom};
      ops.push_back(normal_node(std::move(n)));
    }
  }
  if (ops.size() == 1) return ops.front();
  Node n;
  n.kind = Kind::Mul;
  n.ops = std::move(ops);
  return normal_node(std::move(n));
}

Expr to_expr(const Poly& p) {
  if (p.empty()) return Expr(0);
  if (p.size() == 1) return term_expr(p.begin()->first, p.begin()->second);
  std::vector<Expr> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p) terms.push_back(term_expr(m, c));
  Node n;
  n.kind = Kind::Add;
  n.ops = std::move(terms);
  return normal_node(std::move(n));
}

Poly diff(const Poly& p, std::string_view coord);

Poly diff_atom(const Expr& a, std::string_view coord) {
  switch (a.kind()) {
    case Kind::Symbol: return a.name() == coord ? constant(1) : Poly{};
    case Kind::Apply: {
      const Poly u = poly_of(a.operands()[0], true);
      const Poly du = diff(u, coord);
      if (du.empty()) return {};
      switch (a.func()) {
        case Func::Exp: return mul(atom_poly(a), du);
        case Func::Ln: return mul(du, pow_int(u, -1));
        case Func::Sqrt: return scale(mul(du, atom_poly(a, -1)), Rational(1, 2));
        case Func::Sin: return mul(make_apply(Func::Cos, u), du);
        case Func::Cos: return scale(mul(make_apply(Func::Sin, u), du), -1);
        case Func::Sinh: return mul(make_apply(Func::Cosh, u), du);
        case Func::Cosh: return mul(make_apply(Func::Sinh, u), du);
      }
      return {};
    }
    case Kind::Pow: {
      const Poly b = poly_of(a.operands()[0], true);
      const Poly db = diff(b, coord);
      if (db.empty()) return {};
      return scale(mul(mul(atom_poly(a), pow_int(b, -1)), db), a.number());
    }
    default: return {};
  }
}

Poly diff(const Poly& p, std::string_view coord) {
  Poly r;
  for (const auto& [m, c] : p) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!depends_on(m[i].atom, coord)) continue;
      Poly da = diff_atom(m[i].atom, coord);
      if (da.empty()) continue;
      Monomial rest = m;
      if (--rest[i].exp == 0) rest.erase(rest.begin() + static_cast<long>(i));
      Poly term = mul(Poly{{std::move(rest), c * m[i].exp}}, da);
      r = add(std::move(r), term);
    }
  }
  return r;
}

Expr from_poly_op(const Expr& a, const Expr& b, Poly (*op)(const Poly&, const Poly&)) {
  return to_expr(op(poly_of(a, true), poly_of(b, true)));
}

Poly add_op(const Poly& a, const Poly& b) { return add(a, b); }
Poly sub_op(const Poly& a, const Poly& b) { return add(a, b, Rational(-1)); }
Poly mul_op(const Poly& a, const Poly& b) { return mul(a, b); }
Poly div_op(const Poly& a, const Poly& b) {
  Rational c;
  if (is_constant(b, &c)) {
    if (c == 0) throw EvalError("division by zero");
    return scale(a, 1 / c);
  }
  return mul(a, pow_int(b, -1));
}

}  // namespace

Expr Expr::operator-() const { return to_expr(scale(poly_of(*this, true), -1)); }
Expr& Expr::operator+=(const Expr& rhs) { return *this = *this + rhs; }
Expr& Expr::operator-=(const Expr& rhs) { return *this = *this - rhs; }
Expr& Expr::operator*=(const Expr& rhs) { return *this = *this * rhs; }
Expr& Expr::operator/=(const Expr& rhs) { return *this = *this / rhs; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero_constant() && b.is_normal()) return b;
  if (b.is_zero_constant() && a.is_normal()) return a;
  return from_poly_op(a, b, add_op);
}
Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero_constant() && a.is_normal()) return a;
  return from_poly_op(a, b, sub_op);
}
Expr operator*(const Expr& a, const Expr& b) {
  if ((a.is_zero_constant() || b.is_zero_constant())) return Expr(0);
  return from_poly_op(a, b, mul_op);
}
Expr operator/(const Expr& a, const Expr& b) { return from_poly_op(a, b, div_op); }

Expr normalize(const Expr& e) { return to_expr(poly_of(e, false)); }

Expr pow(const Expr& base, const Rational& exponent) {
  Poly b = poly_of(base, true);
  if (is_integer(exponent)) return to_expr(pow_int(b, exponent.get_num().get_si()));
  return to_expr(frac_power(b, exponent));
}

Expr apply(Func f, const Expr& arg) { return to_expr(make_apply(f, poly_of(arg, true))); }

Expr differentiate(const Expr& e, std::string_view coordinate, const Context& ctx) {
  if (!ctx.is_coordinate(coordinate)) {
    throw std::invalid_argument("'" + std::string(coordinate) + "' is not a coordinate");
  }
  return to_expr(diff(poly_of(e, true), coordinate));
}

// ---------------------------------------------------------------------------
// Symbols, evaluation

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Kind::Symbol) {
    out.insert(e.name());
    return;
  }
  for (const Expr& c : e.operands()) collect_symbols(c, out);
}

std::optional<long double> eval_impl(const Expr& e, const Point& pt) {
  auto finite = [](long double v) -> std::optional<long double> {
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  };
  switch (e.kind()) {
    case Kind::Number: return e.approx();
    case Kind::Symbol: {
      auto it = pt.find(e.name());
      if (it == pt.end()) return std::nullopt;
      return static_cast<long double>(it->second);
    }
    case Kind::Add: {
      long double s = 0;
      for (const Expr& c : e.operands()) {
        auto v = eval_impl(c, pt);
        if (!v) return std::nullopt;
        s += *v;
      }
      return finite(s);
    }
    case Kind::Mul: {
      long double s = 1;
      for (const Expr& c : e.operands()) {
        auto v = eval_impl(c, pt);
        if (!v) return std::nullopt;
        s *= *v;
      }
      return finite(s);
    }
    case Kind::Pow: {
      auto b = eval_impl(e.operands()[0], pt);
      if (!b) return std::nullopt;
      const Rational& r = e.number();
      if (is_integer(r)) {
        long n = r.get_num().get_si();
        if (*b == 0 && n < 0) return std::nullopt;
        long double acc = 1, base = *b;
        unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
        while (k) {
          if (k & 1) acc *= base;
          base *= base;
          k >>= 1;
        }
        return finite(n < 0 ? 1 / acc : acc);
      }
      if (*b < 0 || (*b == 0 && r < 0)) return std::nullopt;
      return finite(std::pow(*b, e.approx()));
    }
    case Kind::Apply: {
      auto a = eval_impl(e.operands()[0], pt);
      if (!a) return std::nullopt;
      switch (e.func()) {
        case Func::Exp: return finite(std::exp(*a));
        case Func::Ln:
          if (*a <= 0) return std::nullopt;
          return finite(std::log(*a));
        case Func::Sqrt:
          if (*a < 0) return std::nullopt;
          return finite(std::sqrt(*a));
        case Func::Sin: return finite(std::sin(*a));
        case Func::Cos: return finite(std::cos(*a));
        case Func::Sinh: return finite(std::sinh(*a));
        case Func::Cosh: return finite(std::cosh(*a));
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::set<std::string> symbols_of(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view symbol) {
  if (e.kind() == Kind::Symbol) return e.name() == symbol;
  for (const Expr& c : e.operands()) {
    if (depends_on(c, symbol)) return true;
  }
  return false;
}

std::size_t tree_size(const Expr& e) {
  std::size_t n = 1;
  for (const Expr& c : e.operands()) n += tree_size(c);
  return n;
}

std::optional<long double> try_eval(const Expr& e, const Point& point) { return eval_impl(e, point); }

double eval(const Expr& e, const Point& point) {
  for (const auto& s : symbols_of(e)) {
    if (point.find(s) == point.end()) throw EvalError("symbol '" + s + "' is not assigned");
  }
  auto v = eval_impl(e, point);
  if (!v) throw EvalError("domain error evaluating " + to_string(e));
  return static_cast<double>(*v);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string number_string(const Rational& r) { return r.get_str(); }

bool needs_pow_parens(const Expr& base) {
  switch (base.kind()) {
    case Kind::Symbol:
    case Kind::Apply: return false;
    case Kind::Number: return !(is_integer(base.number()) && base.number() >= 0);
    default: return true;
  }
}

std::string print(const Expr& e);

std::string print_factor(const Expr& f) {
  if (f.kind() == Kind::Add || f.kind() == Kind::Mul) return "(" + print(f) + ")";
  return print(f);
}

std::string print(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number: return number_string(e.number());
    case Kind::Symbol: return e.name();
    case Kind::Apply: return std::string(func_name(e.func())) + "(" + print(e.operands()[0]) + ")";
    case Kind::Pow: {
      const Expr& b = e.operands()[0];
      std::string s = needs_pow_parens(b) ? "(" + print(b) + ")" : print(b);
      const Rational& r = e.number();
      if (is_integer(r)) return s + "^" + r.get_str();
      return s + "^(" + r.get_str() + ")";
    }
    case Kind::Mul: {
      std::string out;
      auto ops = e.operands();
      std::size_t start = 0;
      if (ops.size() > 1 && ops[0].kind() == Kind::Number && ops[0].number() == -1) {
        out = "-";
        start = 1;
      }
      for (std::size_t i = start; i < ops.size(); ++i) {
        if (i > start) out += "*";
        out += print_factor(ops[i]);
      }
      return out;
    }
    case Kind::Add: {
      std::string out;
      bool first = true;
      for (const Expr& t : e.operands()) {
        std::string s = t.kind() == Kind::Add ? "(" + print(t) + ")" : print(t);
        if (first) {
          out = s;
          first = false;
        } else if (!s.empty() && s[0] == '-') {
          out += " - " + s.substr(1);
        } else {
          out += " + " + s;
        }
      }
      return out;
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position + 1)),
      position_(position) {}

UnknownSymbolError::UnknownSymbolError(std::string symbol)
    : std::runtime_error("unknown symbol '" + symbol + "'"), symbol_(std::move(symbol)) {}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Context& ctx) : text_(text), ctx_(ctx) {}

  Expr parse_all() {
    skip_ws();
    if (at_end()) throw ParseError("empty expression", pos_);
    Expr e = parse_expr();
    skip_ws();
    if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (at_end()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr parse_expr() {
    std::vector<Expr> terms{parse_term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(parse_term());
      } else if (accept('-')) {
        terms.push_back(Expr::raw_mul({Expr(-1), parse_term()}));
      } else {
        break;
      }
    }
    return Expr::raw_add(std::move(terms));
  }

  Expr parse_term() {
    std::vector<Expr> factors{parse_factor()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(parse_factor());
      } else if (accept('/')) {
        factors.push_back(Expr::raw_pow(parse_factor(), Rational(-1)));
      } else {
        break;
      }
    }
    return Expr::raw_mul(std::move(factors));
  }

  Expr parse_factor() {
    Expr base = parse_base();
    if (accept('^')) return Expr::raw_pow(std::move(base), parse_exponent());
    return base;
  }

  mpz_class parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (peek() == '-' || peek() == '+') {
      neg = peek() == '-';
      ++pos_;
    }
    skip_ws();
    std::size_t digits = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (digits == pos_) throw ParseError("expected integer exponent", start);
    mpz_class v(std::string(text_.substr(digits, pos_ - digits)));
    return neg ? mpz_class(-v) : v;
  }

  Rational parse_exponent() {
    skip_ws();
    if (accept('(')) {
      mpz_class p = parse_integer();
      mpz_class q = 1;
      if (accept('/')) {
        std::size_t at = pos_;
        q = parse_integer();
        if (q == 0) throw ParseError("zero denominator in exponent", at);
      }
      expect(')');
      Rational r(p, q);
      r.canonicalize();
      return r;
    }
    return Rational(parse_integer());
  }

  Rational parse_number() {
    std::size_t start = pos_;
    std::string mantissa;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) mantissa += text_[pos_++];
    long frac_digits = 0;
    if (peek() == '.') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        mantissa += text_[pos_++];
        ++frac_digits;
      }
    }
    if (mantissa.empty()) throw ParseError("malformed number", start);
    long exponent = 0;
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      ++pos_;
      bool neg = false;
      if (peek() == '+' || peek() == '-') {
        neg = peek() == '-';
        ++pos_;
      }
      std::string digits;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += text_[pos_++];
      if (digits.empty()) {
        pos_ = save;
      } else {
        exponent = std::stol(digits) * (neg ? -1 : 1);
      }
    }
    Rational value{mpz_class(mantissa)};
    long shift = exponent - frac_digits;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift < 0) {
      value /= Rational(ten_pow);
    } else {
      value *= Rational(ten_pow);
    }
    value.canonicalize();
    return value;
  }

  Expr parse_base() {
    skip_ws();
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    char c = peek();
    if (c == '-') {
      ++pos_;
      return Expr::raw_mul({Expr(-1), parse_factor()});
    }
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr(parse_number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
      std::string ident(text_.substr(start, pos_ - start));
      skip_ws();
      if (peek() == '(') {
        auto f = func_from_name(ident);
        if (!f) throw ParseError("unknown function '" + ident + "'", start);
        ++pos_;
        Expr arg = parse_expr();
        expect(')');
        return Expr::raw_apply(*f, std::move(arg));
      }
      if (func_from_name(ident)) throw ParseError("function '" + ident + "' requires an argument", start);
      if (!ctx_.contains(ident)) throw UnknownSymbolError(ident);
      return Expr::symbol(std::move(ident));
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  std::string_view text_;
  const Context& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const Context& ctx) { return Parser(text, ctx).parse_all(); }

}  // namespace akg
