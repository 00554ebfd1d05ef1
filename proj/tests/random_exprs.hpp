#pragma once

#include <random>

#include "akg/expr.hpp"

namespace akg::test {

/// Random raw trees over the symbols of a context. Functions are limited to
/// ones defined on the whole sampling box.
class RandomExprs {
 public:
  RandomExprs(const Context& ctx, std::uint64_t seed) : symbols_(ctx.symbols()), rng_(seed) {}

  Expr leaf() {
    if (pick(3) == 0) return Expr(make_rational(static_cast<long>(pick(7)) - 3, static_cast<long>(pick(3)) + 1));
    return Expr::symbol(symbols_[pick(symbols_.size())]);
  }

  Expr tree(int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf();
    switch (pick(7)) {
      case 0: return Expr::raw_add({tree(depth - 1), tree(depth - 1)});
      case 1: return Expr::raw_add({tree(depth - 1), Expr::raw_mul({Expr(-1), tree(depth - 1)})});
      case 2:
      case 3: return Expr::raw_mul({tree(depth - 1), tree(depth - 1)});
      case 4: return Expr::raw_pow(tree(depth - 1), make_rational(static_cast<long>(pick(3)) + 1));
      case 5: {
        static constexpr Func fs[] = {Func::Exp, Func::Sin, Func::Cos, Func::Sinh, Func::Cosh};
        return Expr::raw_apply(fs[pick(5)], tree(depth - 1));
      }
      default:
        // Division by a strictly positive denominator.
        return Expr::raw_mul(
            {tree(depth - 1), Expr::raw_pow(Expr::raw_add({Expr(2), Expr::raw_pow(tree(depth - 2), Rational(2))}),
                                            Rational(-1))});
    }
  }

  /// Random polynomial of total degree at most `degree` in the coordinates.
  Expr polynomial(const std::vector<std::string>& vars, int degree) {
    Expr sum(0);
    for (int t = 0; t < 4; ++t) {
      Expr term(make_rational(static_cast<long>(pick(9)) - 4));
      int d = static_cast<int>(pick(static_cast<std::size_t>(degree) + 1));
      for (int k = 0; k < d; ++k) term = term * Expr::symbol(vars[pick(vars.size())]);
      sum = sum + term;
    }
    return sum;
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  std::vector<std::string> symbols_;
  std::mt19937_64 rng_;
};

}  // namespace akg::test
