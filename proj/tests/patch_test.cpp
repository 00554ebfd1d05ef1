#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "random_exprs.hpp"

namespace akg {
namespace {

using test::chart;
using test::ex;
using test::vanishes;

TEST(Coframe, HeisenbergDualForms) {
  const auto s = test::heisenberg();
  const Mat<Expr>& th = s.patch->coframe();
  // theta^2 = dx3, theta^3 = dx2 - x1 dx3
  EXPECT_TRUE(test::same_vec(th.row(1).transpose(), test::vec(chart(), {"0", "0", "1", "0"})));
  EXPECT_TRUE(test::same_vec(th.row(2).transpose(), test::vec(chart(), {"0", "1", "-x1", "0"})));
  // dx2 = x1 theta^2 + theta^3
  EXPECT_TRUE(test::same_vec(s.patch->frame().row(1).transpose(), test::vec(chart(), {"0", "x1", "1", "0"})));
}

TEST(Coframe, IdentityFrame) {
  const auto p = test::make_patch(chart(), identity<Expr>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(p->coframe()(i, j), Expr(i == j ? 1 : 0));
}

TEST(Coframe, RandomConstantFrameMatchesFloatingInverse) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dist(-9, 9);
  for (int trial = 0; trial < 5; ++trial) {
    Mat<Expr> f(4, 4);
    Eigen::Matrix4d fd;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const long num = dist(rng) + (i == j ? 25 : 0);
        const long den = 1 + (dist(rng) + 9) % 4;
        f(i, j) = Expr(make_rational(num, den));
        fd(i, j) = static_cast<double>(num) / static_cast<double>(den);
      }
    const auto p = test::make_patch(chart(), f);
    const Eigen::Matrix4d inv = fd.inverse();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(eval(p->coframe()(i, j), {}), inv(i, j), 1e-12);
  }
}

TEST(Coframe, RejectsSingularFrame) {
  Mat<Expr> f = identity<Expr>(4);
  f(0, 0) = Expr(0);
  EXPECT_THROW(test::make_patch(chart(), f), SingularMatrixError);
}

TEST(Bracket, HeisenbergRelations) {
  const auto s = test::heisenberg();
  const auto& p = *s.patch;
  const Vec<Expr> e1 = basis<Expr>(4, 0), e2 = basis<Expr>(4, 1);
  EXPECT_TRUE(test::same_vec(p.bracket(e1, e2), basis<Expr>(4, 2)));
  const Vec<Expr> x = test::vec(chart(), {"x2", "lambda*x1", "x4^2", "1"});
  EXPECT_TRUE(test::same_vec(p.bracket(x, x), zero_vec<Expr>(4)));
  // [e2, x4 e2] = e2(x4) e2 = 0
  EXPECT_TRUE(test::same_vec(p.bracket(e2, Vec<Expr>(ex("x4") * e2)), zero_vec<Expr>(4)));
}

TEST(StructureFunctions, Heisenberg) {
  const auto s = test::heisenberg();
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Expr expected(0);
        if (k == 2 && i == 0 && j == 1) expected = Expr(1);
        if (k == 2 && i == 1 && j == 0) expected = Expr(-1);
        EXPECT_EQ(s.patch->structure(k, i, j), expected) << k << i << j;
      }
}

TEST(StructureFunctions, CoordinateFrameAndScaling) {
  const auto flat = test::make_patch(chart(), identity<Expr>(4));
  const auto heis = test::make_patch(chart(), test::heisenberg_frame(chart()));
  const auto scaled = test::make_patch(chart(), Mat<Expr>(Expr(2) * test::heisenberg_frame(chart())));
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        EXPECT_TRUE(flat->structure(k, i, j).is_zero_constant());
        EXPECT_EQ(scaled->structure(k, i, j), Expr(2) * heis->structure(k, i, j));
      }
}

TEST(Apply, FrameDerivatives) {
  const auto s = test::heisenberg();
  EXPECT_EQ(s.patch->apply(1, ex("x2")), ex("x1"));
  EXPECT_EQ(s.patch->apply(3, ex("x4")), Expr(1));
  EXPECT_TRUE(s.patch->apply(0, ex("lambda*x2")).is_zero_constant());
}

TEST(ExteriorDerivative, Examples) {
  const auto s = test::heisenberg();
  const auto& p = *s.patch;
  const Mat<Expr> d3 = p.d(basis<Expr>(4, 2));
  EXPECT_EQ(d3(0, 1), Expr(-1));
  EXPECT_EQ(d3(1, 0), Expr(1));
  // dx2 in the coframe has components e_i(x2) = (0, x1, 1, 0)
  const Mat<Expr> ddx2 = p.d(p.differential(ex("x2")));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_TRUE(ddx2(i, j).is_zero_constant());
  const ThreeForm<Expr> dw = p.d(s.omega());
  for (const auto& c : dw.c) EXPECT_TRUE(c.is_zero_constant());
}

TEST(PatchProperties, JacobiAndCoframeIdentityAreExact) {
  for (const auto& s : {test::heisenberg(), test::flat_kahler()}) {
    Residuals<Expr> rs;
    check_patch(*s.patch, rs);
    for (const auto& r : rs) EXPECT_TRUE(r.value.is_zero_constant()) << r.check << " " << r.component;
  }
  // A frame with non-constant structure functions.
  const Context ctx = chart();
  const auto p = test::make_patch(
      ctx, test::matrix(ctx, {{"1", "0", "x3", "0"}, {"x4", "1", "0", "0"}, {"0", "0", "1", "x1^2"}, {"0", "0", "0", "1"}}));
  Residuals<Expr> rs;
  check_patch(*p, rs);
  EXPECT_TRUE(test::all_hold(rs));
}

TEST(PatchProperties, DSquaredVanishesOnRandomQuadratics) {
  const Context ctx = chart();
  const auto s = test::heisenberg();
  test::RandomExprs gen(ctx, 11);
  for (int t = 0; t < 20; ++t) {
    const Expr f = gen.polynomial(ctx.coordinates(), 2);
    const Mat<Expr> ddf = s.patch->d(s.patch->differential(f));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_TRUE(ddf(i, j).is_zero_constant()) << to_string(f);
  }
}

TEST(PatchProperties, BracketAntisymmetryAndLeibniz) {
  const Context ctx = chart();
  const auto s = test::heisenberg();
  const auto& p = *s.patch;
  test::RandomExprs gen(ctx, 5);
  SamplingConfig cfg;
  for (int t = 0; t < 10; ++t) {
    Vec<Expr> x(4), y(4);
    for (int i = 0; i < 4; ++i) {
      x(i) = normalize(gen.tree(2));
      y(i) = normalize(gen.tree(2));
    }
    const Expr h = normalize(gen.tree(2));
    const Vec<Expr> xy = p.bracket(x, y);
    EXPECT_TRUE(test::same_vec(xy, Vec<Expr>(-p.bracket(y, x))));
    const Vec<Expr> lhs = p.bracket(x, Vec<Expr>(h * y));
    const Vec<Expr> rhs = p.apply(x, h) * y + h * xy;
    for (int i = 0; i < 4; ++i) {
      const ZeroVerdict v = is_zero(lhs(i) - rhs(i), cfg);
      ASSERT_TRUE(holds_zero(v));
      EXPECT_LE(residual_of(v), 1e-9);
    }
    EXPECT_TRUE(test::same_vec(xy, p.bracket_frame(x, y)));
  }
}

}  // namespace
}  // namespace akg
