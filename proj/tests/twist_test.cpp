#include <gtest/gtest.h>

#include "akg/linalg.hpp"
#include "akg/twist.hpp"
#include "fixtures.hpp"

namespace akg {
namespace {

using test::chart;
using test::ex;

Residuals<Expr> full_validation(const AKStructure<Expr>& s) {
  Residuals<Expr> rs;
  const auto lc = levi_civita(s);
  check_structure(s, lc, rs);
  check_chern(s, lc, chern_connection(s, lc), rs);
  return rs;
}

TEST(Hamiltonian, WorkedExamples) {
  const auto s = test::heisenberg();
  EXPECT_TRUE(test::same_vec(hamiltonian_vf(ex("lambda*x2"), s), test::vec(chart(), {"-lambda", "0", "0", "lambda*x1"})));
  EXPECT_TRUE(test::same_vec(hamiltonian_vf(ex("x4^2"), s), test::vec(chart(), {"0", "-2*x4", "0", "0"})));
  EXPECT_TRUE(test::same_vec(hamiltonian_vf(ex("3/2"), s), zero_vec<Expr>(4)));
}

TEST(Hamiltonian, DefiningRelation) {
  // omega(X_f, Y) = -df(Y) for every frame field Y
  const auto s = test::heisenberg();
  const Expr f = ex("x1*x3 + exp(x4)*x2");
  const Vec<Expr> x = hamiltonian_vf(f, s);
  const Vec<Expr> df = s.patch->differential(f);
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(test::vanishes(bilinear(x, s.omega(), basis<Expr>(4, i)) + df(i)));
}

TEST(LieDerivative, WorkedExamples) {
  const auto s = test::heisenberg();
  const Mat<Expr> p1 = lie_derivative_J(hamiltonian_vf(ex("lambda*x2"), s), s);
  EXPECT_TRUE(test::same_mat(p1, test::matrix(chart(), {{"0", "-lambda", "0", "0"},
                                                        {"-lambda", "0", "0", "0"},
                                                        {"0", "0", "0", "lambda"},
                                                        {"0", "0", "lambda", "0"}})));
  const Mat<Expr> p2 = lie_derivative_J(hamiltonian_vf(ex("x4^2"), s), s);
  EXPECT_TRUE(test::same_mat(p2, test::matrix(chart(), {{"2*x4", "0", "0", "0"},
                                                        {"0", "2", "0", "0"},
                                                        {"0", "0", "-2*x4", "0"},
                                                        {"0", "0", "0", "-2"}})));
  EXPECT_TRUE(test::same_mat(lie_derivative_J(zero_vec<Expr>(4), s), zeros<Expr>(4, 4)));
}

TEST(PreTwist, ExamplesPassAndJItselfFails) {
  const auto s = test::heisenberg();
  const auto lc = levi_civita(s);
  for (const char* f : {"lambda*x2", "x4^2"}) {
    const Vec<Expr> x = hamiltonian_vf(ex(f), s);
    Residuals<Expr> rs;
    check_pre_twist(lie_derivative_J(x, s), x, s, lc, rs);
    EXPECT_TRUE(test::all_hold(rs)) << f;
  }
  Residuals<Expr> rs;
  check_pre_twist(s.J, zero_vec<Expr>(4), s, lc, rs);
  const auto results = decide(rs, test::sampling());
  const CheckResult* anti = find_check(results, "psi~ anticommutes with J");
  ASSERT_NE(anti, nullptr);
  EXPECT_TRUE(anti->failed());
  EXPECT_TRUE(anti->witness.has_value());
}

TEST(ExpStructural, WorkedExamples) {
  const auto s = test::heisenberg();
  const auto cfg = test::sampling();
  const auto t2 = exp_structural(lie_derivative_J(hamiltonian_vf(ex("x4^2"), s), s), cfg);
  EXPECT_TRUE(test::same_mat(t2.psi, test::matrix(chart(), {{"exp(2*x4)", "0", "0", "0"},
                                                            {"0", "exp(2)", "0", "0"},
                                                            {"0", "0", "exp(-2*x4)", "0"},
                                                            {"0", "0", "0", "exp(-2)"}})));
  const auto t1 = exp_structural(lie_derivative_J(hamiltonian_vf(ex("lambda*x2"), s), s), cfg);
  // Exact normal forms, not just numerically equal ones.
  EXPECT_EQ(t1.psi(0, 0), ex("cosh(lambda)"));
  EXPECT_EQ(t1.psi(1, 0), ex("-sinh(lambda)"));
  EXPECT_EQ(t1.psi(3, 2), ex("sinh(lambda)"));
  EXPECT_EQ(t1.psi(3, 3), ex("cosh(lambda)"));
  EXPECT_TRUE(test::same_mat(t1.psi, test::matrix(chart(), {{"cosh(lambda)", "-sinh(lambda)", "0", "0"},
                                                            {"-sinh(lambda)", "cosh(lambda)", "0", "0"},
                                                            {"0", "0", "cosh(lambda)", "sinh(lambda)"},
                                                            {"0", "0", "sinh(lambda)", "cosh(lambda)"}})));
  const auto t0 = exp_structural(zeros<Expr>(4, 4), cfg);
  EXPECT_TRUE(test::same_mat(t0.psi, identity<Expr>(4)));
  EXPECT_TRUE(test::same_mat(t0.psi_inv, identity<Expr>(4)));
}

TEST(ExpStructural, OtherBlockShapes) {
  const auto cfg = test::sampling();
  // Nilpotent block: exp(M) = Id + M.
  Mat<Expr> nil = zeros<Expr>(2, 2);
  nil(0, 1) = ex("x1");
  const auto tn = exp_structural(nil, cfg);
  EXPECT_EQ(tn.psi(0, 1), ex("x1"));
  EXPECT_EQ(tn.psi_inv(0, 1), ex("-x1"));
  // Rotation block: M^2 = -Id.
  Mat<Expr> rot = zeros<Expr>(2, 2);
  rot(0, 1) = Expr(-1);
  rot(1, 0) = Expr(1);
  const auto tr = exp_structural(rot, cfg);
  EXPECT_NEAR(eval(tr.psi(0, 0), {}), std::cos(1.0), 1e-15);
  EXPECT_NEAR(eval(tr.psi(1, 0), {}), std::sin(1.0), 1e-15);
  // Non-monomial mu goes through sqrt and samples where mu < 0 are rejected.
  Mat<Expr> gen = zeros<Expr>(2, 2);
  gen(0, 1) = ex("1 + x1^2");
  gen(1, 0) = ex("2");
  const auto tg = exp_structural(gen, cfg);
  EXPECT_TRUE(test::same_mat(Mat<Expr>(tg.psi * tg.psi_inv), identity<Expr>(2)));
}

TEST(ExpStructural, RejectsLargeOrNonScalarBlocks) {
  const auto cfg = test::sampling();
  Mat<Expr> chain = zeros<Expr>(3, 3);
  chain(0, 1) = Expr(1);
  chain(1, 2) = Expr(1);
  try {
    exp_structural(chain, cfg);
    FAIL() << "expected failure";
  } catch (const StructuralExpError& e) {
    EXPECT_NE(std::string(e.what()).find("{e1,e2,e3}"), std::string::npos);
  }
  Mat<Expr> skew = zeros<Expr>(2, 2);
  skew(0, 0) = ex("x4");
  skew(0, 1) = Expr(1);
  EXPECT_THROW(exp_structural(skew, cfg), StructuralExpError);
}

TEST(Twisted, IdentityLeavesStructureUnchanged) {
  const auto s = test::heisenberg();
  const TwistMap<Expr> id{identity<Expr>(4), identity<Expr>(4), false};
  const auto t = twisted_structure(s, id);
  EXPECT_TRUE(test::same_mat(t.g, s.g));
  EXPECT_TRUE(test::same_mat(t.J, s.J));
  EXPECT_TRUE(test::same_mat(t.omega(), s.omega()));
}

TEST(Twisted, ExampleOneFrame) {
  const auto s = test::heisenberg();
  const auto tm = exp_structural(lie_derivative_J(hamiltonian_vf(ex("lambda*x2"), s), s), test::sampling());
  const auto t = twisted_structure(s, tm);
  Residuals<Expr> rs;
  check_adapted(t, tm.psi, rs);  // f_i = psi e_i is h-orthonormal and I f_i = f_{n+i}
  EXPECT_TRUE(test::all_hold(rs));
  EXPECT_TRUE(test::same_mat(Mat<Expr>(t.J * tm.psi), Mat<Expr>(tm.psi * s.J)));
}

TEST(Twisted, ExampleTwoKeepsOmega) {
  const auto s = test::heisenberg();
  const auto tm = exp_structural(lie_derivative_J(hamiltonian_vf(ex("x4^2"), s), s), test::sampling());
  const auto t = twisted_structure(s, tm);
  // Direct oracle: omega^psi(e_i, e_j) = h(I e_i, e_j) entrywise.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Expr w = bilinear(Vec<Expr>(t.J.col(i)), t.g, basis<Expr>(4, j));
      EXPECT_TRUE(test::vanishes(w - s.omega()(i, j)));
    }
}

// Hamiltonians whose psi~ the structural rule handles.
const char* const kFamily[] = {"lambda*x2", "x4^2", "mu*x4^2", "3*lambda*x2", "7", "lambda*x2 + x1", "x3"};

TEST(TwistFamily, AxiomsAndTwistedValidation) {
  const auto s = test::heisenberg();
  const auto lc = levi_civita(s);
  const auto cfg = test::sampling();
  for (const char* f : kFamily) {
    const Vec<Expr> x = hamiltonian_vf(ex(f), s);
    const Mat<Expr> pt = lie_derivative_J(x, s);
    Residuals<Expr> rs;
    check_pre_twist(pt, x, s, lc, rs);
    const auto tm = exp_structural(pt, cfg);
    check_twist_map(s, tm, rs);
    const auto t = twisted_structure(s, tm);
    check_omega_preserved(s, t, rs);
    EXPECT_TRUE(test::all_hold(rs)) << f;
    EXPECT_TRUE(test::all_hold(full_validation(t))) << f;
    EXPECT_FALSE(check_positive("det psi", {determinant(tm.psi)}, cfg).failed()) << f;
    EXPECT_FALSE(check_positive("h", leading_minors(t.g), cfg).failed()) << f;
  }
}

TEST(TwistFamily, SeriesAgreesWithStructural) {
  const auto s = test::heisenberg();
  SamplingConfig cfg;
  cfg.lo = -0.5;  // keeps the norm of psi~ at most 1/2
  cfg.hi = 0.5;
  for (const char* f : {"lambda*x2", "lambda*x2/2 + x1/4"}) {
    const Mat<Expr> pt = lie_derivative_J(hamiltonian_vf(ex(f), s), s);
    const auto exact = exp_structural(pt, cfg);
    const auto series = exp_series(pt, 12);
    EXPECT_TRUE(series.approximate);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const ZeroVerdict v = is_zero(series.psi(i, j) - exact.psi(i, j), cfg);
        EXPECT_TRUE(holds_zero(v)) << f << " " << i << j;
        const ZeroVerdict w = is_zero(series.psi_inv(i, j) - exact.psi_inv(i, j), cfg);
        EXPECT_TRUE(holds_zero(w)) << f << " " << i << j;
      }
  }
}

TEST(TwistFamily, NumericExponentialMatchesStructural) {
  const Context ctx = chart();
  const auto s = test::heisenberg();
  const Mat<Expr> pt = lie_derivative_J(hamiltonian_vf(ex("x4^2"), s), s);
  const auto exact = exp_structural(pt, test::sampling());
  const JetSpace space(4, 3);
  for (double x4 : {-0.9, 0.1, 0.7}) {
    const Point at{{"x1", 0.3}, {"x2", -0.2}, {"x3", 0.5}, {"x4", x4}, {"lambda", 0.4}, {"mu", 0.1}};
    const auto numeric = exp_numeric(to_jets(pt, at, ctx, space));
    const Mat<Jet> want = to_jets(exact.psi, at, ctx, space);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int c = 0; c < space.size(); ++c)
          EXPECT_NEAR(static_cast<double>(numeric.psi(i, j).coefficient(c)),
                      static_cast<double>(want(i, j).coefficient(c)), 1e-11);
  }
}

TEST(ExpModeParsing, Forms) {
  EXPECT_EQ(ExpMode::parse("structural").kind, ExpMode::Kind::Structural);
  EXPECT_EQ(ExpMode::parse("series:12").order, 12);
  EXPECT_EQ(ExpMode::parse("numeric").kind, ExpMode::Kind::NumericOnly);
  EXPECT_THROW(ExpMode::parse("series:0"), std::invalid_argument);
  EXPECT_THROW(ExpMode::parse("series:x"), std::invalid_argument);
  EXPECT_THROW(ExpMode::parse("pade"), std::invalid_argument);
}

}  // namespace
}  // namespace akg
