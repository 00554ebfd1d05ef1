#include "akg/jet.hpp"

#include <cmath>
#include <map>

namespace akg {

JetSpace::JetSpace(int vars, int order) : vars_(vars), order_(order) {
  if (vars < 0 || order < 0) throw std::invalid_argument("jet space needs nonnegative sizes");
  // Enumerate exponent vectors degree by degree.
  std::vector<std::vector<int>> current{std::vector<int>(vars, 0)};
  for (int d = 0; d <= order; ++d) {
    for (const auto& e : current) {
      exponents_.push_back(e);
      degree_.push_back(d);
    }
    std::vector<std::vector<int>> next;
    std::map<std::vector<int>, bool> seen;
    for (const auto& e : current) {
      for (int v = 0; v < vars; ++v) {
        auto f = e;
        ++f[v];
        if (!seen[f]) {
          seen[f] = true;
          next.push_back(f);
        }
      }
    }
    current = std::move(next);
  }
  const int n = size();
  for (int a = 0; a < n; ++a) {
    product_rows_.push_back(static_cast<int>(products_.size()));
    for (int b = 0; b < n; ++b) {
      if (degree_[a] + degree_[b] > order) continue;
      std::vector<int> e(vars);
      for (int v = 0; v < vars; ++v) e[v] = exponents_[a][v] + exponents_[b][v];
      products_.push_back({a, b, index_of(e)});
    }
  }
  product_rows_.push_back(static_cast<int>(products_.size()));
  partials_.resize(vars);
  for (int v = 0; v < vars; ++v) {
    for (int a = 0; a < n; ++a) {
      if (exponents_[a][v] == 0) continue;
      auto e = exponents_[a];
      --e[v];
      partials_[v].push_back({a, index_of(e), static_cast<long double>(exponents_[a][v])});
    }
  }
}

int JetSpace::index_of(const std::vector<int>& exps) const {
  for (int i = 0; i < size(); ++i) {
    if (exponents_[i] == exps) return i;
  }
  return -1;
}

Jet Jet::constant(const JetSpace* space, long double v) {
  Jet j(v);
  j.widen(space);
  return j;
}

Jet Jet::variable(const JetSpace* space, int var, long double at) {
  Jet j = constant(space, at);
  std::vector<int> e(space->vars(), 0);
  e[var] = 1;
  if (space->order() >= 1) j.c_[space->index_of(e)] = 1.0L;
  return j;
}

void Jet::widen(const JetSpace* space) {
  if (space == nullptr || space_ == space) return;
  if (space_ != nullptr) throw std::logic_error("jets from different spaces");
  space_ = space;
  c_.resize(space->size(), 0.0L);
}

Jet Jet::partial(int var) const {
  if (space_ == nullptr) return Jet();
  Jet r = constant(space_, 0.0L);
  for (const auto& t : space_->partials(var)) r.c_[t.to] += t.factor * c_[t.from];
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Jet& Jet::operator+=(const Jet& rhs) {
  widen(rhs.space_);
  if (rhs.space_ == nullptr) {
    c_[0] += rhs.c_[0];
  } else {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  }
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  widen(rhs.space_);
  if (rhs.space_ == nullptr) {
    c_[0] -= rhs.c_[0];
  } else {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  }
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.space_ == nullptr || b.space_ == nullptr) {
    const Jet& scalar = a.space_ == nullptr ? a : b;
    Jet r = a.space_ == nullptr ? b : a;
    for (auto& x : r.c_) x *= scalar.c_[0];
    return r;
  }
  if (a.space_ != b.space_) throw std::logic_error("jets from different spaces");
  Jet r = Jet::constant(a.space_, 0.0L);
  const auto& terms = a.space_->products();
  const auto& rows = a.space_->product_rows();
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    const long double x = a.c_[i];
    if (x == 0) continue;
    for (int t = rows[i]; t < rows[i + 1]; ++t) r.c_[terms[t].c] += x * b.c_[terms[t].b];
  }
  return r;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet operator/(const Jet& a, const Jet& b) {
  if (b.space_ == nullptr) {
    if (b.c_[0] == 0) throw EvalError("division by zero");
    Jet r = a;
    for (auto& x : r.c_) x /= b.c_[0];
    return r;
  }
  return a * inverse(b);
}

Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet Jet::compose(const std::vector<long double>& d) const {
  if (space_ == nullptr) return Jet(d[0]);
  Jet delta = *this;
  delta.c_[0] = 0;
  // Horner in delta; terms beyond the space order vanish on their own.
  const int k = std::min<int>(space_->order(), static_cast<int>(d.size()) - 1);
  Jet r = constant(space_, d[k]);
  for (int m = k - 1; m >= 0; --m) {
    r = r * delta;
    r.c_[0] += d[m];
  }
  return r;
}

namespace {

int order_of(const Jet& a) { return a.space() ? a.space()->order() : 0; }

std::vector<long double> factorial_scaled(std::vector<long double> derivs) {
  long double f = 1;
  for (std::size_t m = 0; m < derivs.size(); ++m) {
    if (m > 0) f *= static_cast<long double>(m);
    derivs[m] /= f;
  }
  return derivs;
}

// Taylor coefficients of x^r at x0 > 0 (or any x0 when r is an integer).
std::vector<long double> power_series(long double x0, long double r, int k) {
  std::vector<long double> d(k + 1);
  long double binom = 1;
  for (int m = 0; m <= k; ++m) {
    d[m] = binom * std::pow(x0, r - m);
    binom *= (r - m) / static_cast<long double>(m + 1);
  }
  return d;
}

}  // namespace

Jet inverse(const Jet& a) {
  if (a.value() == 0) throw EvalError("division by zero");
  return a.compose(power_series(a.value(), -1, order_of(a)));
}

Jet exp(const Jet& a) {
  const int k = order_of(a);
  return a.compose(factorial_scaled(std::vector<long double>(k + 1, std::exp(a.value()))));
}

Jet ln(const Jet& a) {
  const long double x = a.value();
  if (!(x > 0)) throw EvalError("ln of a nonpositive value");
  const int k = order_of(a);
  std::vector<long double> d(k + 1);
  d[0] = std::log(x);
  for (int m = 1; m <= k; ++m) d[m] = ((m % 2 == 1) ? 1.0L : -1.0L) / (m * std::pow(x, m));
  return a.compose(d);
}

Jet sqrt(const Jet& a) {
  const long double x = a.value();
  if (x < 0 || (x == 0 && order_of(a) > 0)) throw EvalError("sqrt of a negative value");
  return a.compose(power_series(x, 0.5L, order_of(a)));
}

namespace {

std::vector<long double> cyclic(long double f0, long double f1, long double f2, long double f3, int k) {
  const long double cycle[4] = {f0, f1, f2, f3};
  std::vector<long double> d(k + 1);
  for (int m = 0; m <= k; ++m) d[m] = cycle[m % 4];
  return factorial_scaled(d);
}

std::vector<long double> alternating(long double f0, long double f1, int k) {
  std::vector<long double> d(k + 1);
  for (int m = 0; m <= k; ++m) d[m] = (m % 2 == 0) ? f0 : f1;
  return factorial_scaled(d);
}

}  // namespace

Jet sin(const Jet& a) {
  const long double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(cyclic(s, c, -s, -c, order_of(a)));
}

Jet cos(const Jet& a) {
  const long double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(cyclic(c, -s, -c, s, order_of(a)));
}

Jet sinh(const Jet& a) { return a.compose(alternating(std::sinh(a.value()), std::cosh(a.value()), order_of(a))); }

Jet cosh(const Jet& a) { return a.compose(alternating(std::cosh(a.value()), std::sinh(a.value()), order_of(a))); }

Jet pow(const Jet& a, const Rational& exponent) {
  if (exponent.get_den() == 1 && exponent >= 0) {
    unsigned long n = exponent.get_num().get_ui();
    Jet r(1), base = a;
    while (n > 0) {
      if (n & 1U) r = r * base;
      n >>= 1U;
      if (n > 0) base = base * base;
    }
    return r;
  }
  const long double x = a.value();
  const bool integral = exponent.get_den() == 1;
  if (x == 0 || (!integral && x < 0)) throw EvalError("power undefined at this point");
  const long double r = static_cast<long double>(exponent.get_num().get_d()) / exponent.get_den().get_d();
  return a.compose(power_series(x, r, order_of(a)));
}

Jet taylor_eval(const Expr& e, const Point& at, const Context& ctx, const JetSpace& space) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: return Jet(e.approx());
    case K::Symbol: {
      auto it = at.find(e.name());
      if (it == at.end()) throw EvalError("no value for symbol " + e.name());
      if (auto k = ctx.coordinate_index(e.name())) return Jet::variable(&space, *k, it->second);
      return Jet(static_cast<long double>(it->second));
    }
    case K::Add: {
      Jet r;
      for (const auto& t : e.operands()) r += taylor_eval(t, at, ctx, space);
      return r;
    }
    case K::Mul: {
      Jet r(1);
      for (const auto& t : e.operands()) r = r * taylor_eval(t, at, ctx, space);
      return r;
    }
    case K::Pow: return pow(taylor_eval(e.operands()[0], at, ctx, space), e.number());
    case K::Apply: {
      const Jet u = taylor_eval(e.operands()[0], at, ctx, space);
      switch (e.func()) {
        case Func::Exp: return exp(u);
        case Func::Ln: return ln(u);
        case Func::Sqrt: return sqrt(u);
        case Func::Sin: return sin(u);
        case Func::Cos: return cos(u);
        case Func::Sinh: return sinh(u);
        case Func::Cosh: return cosh(u);
      }
    }
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace akg
