#include <gtest/gtest.h>

#include "akg/eta.hpp"
#include "fixtures.hpp"

namespace akg {
namespace {

using test::chart;
using test::ex;

struct Twisted {
  AKStructure<Expr> s;
  TwistMap<Expr> t;
};

Twisted from_hamiltonian(const std::string& f) {
  auto s = test::heisenberg();
  auto t = exp_structural(lie_derivative_J(hamiltonian_vf(ex(f), s), s), test::sampling());
  return {s, t};
}

struct Run {
  TheoremResiduals<Expr> rs;
  TheoremData<Expr> data;
};

Run run(const Twisted& tw) {
  Run r;
  r.data = verify_theorem(tw.s, tw.t, identity<Expr>(4), r.rs);
  return r;
}

// 1-form with the given theta components.
Vec<Expr> form(std::vector<std::string> xs) { return test::vec(chart(), xs); }

TEST(Gamma, IdentityTwistAndSymmetry) {
  const auto s = test::heisenberg();
  const auto lc = levi_civita(s);
  const TwistMap<Expr> id{identity<Expr>(4), identity<Expr>(4), false};
  for (const auto& g : gammas(s, lc, id)) EXPECT_TRUE(test::same_mat(g, zeros<Expr>(4, 4)));

  const auto tw = from_hamiltonian("x4^2");
  const auto table = gammas(tw.s, lc, tw.t);
  // gamma_{e4} e1 = e4(exp(-2 x4)) e1 plus connection terms that cancel for
  // a diagonal psi^-1 on this frame: the Leibniz expansion gives -2 exp(-2 x4).
  EXPECT_TRUE(test::vanishes(table[3](0, 0) - ex("-2*exp(-2*x4)")));
  for (const auto& g : table) EXPECT_TRUE(test::same_mat(Mat<Expr>(g.transpose() * tw.s.g), Mat<Expr>(tw.s.g * g)));
}

TEST(QField, IdentitySymmetryAndBruteForce) {
  const auto s = test::heisenberg();
  const auto lc = levi_civita(s);
  const TwistMap<Expr> id{identity<Expr>(4), identity<Expr>(4), false};
  const auto id_table = gammas(s, lc, id);
  EXPECT_TRUE(test::same_vec(q_field(s, id, id_table, basis<Expr>(4, 0), basis<Expr>(4, 1)), zero_vec<Expr>(4)));

  const auto tw = from_hamiltonian("x4^2");
  const auto table = gammas(tw.s, lc, tw.t);
  const Vec<Expr> e1 = basis<Expr>(4, 0);
  // g = Id, so Q(e1,e1)^c = 2 g(psi^-1 gamma_c e1, e1) = 2 (psi^-1 gamma_c)(1,1).
  Vec<Expr> brute(4);
  for (int c = 0; c < 4; ++c) brute(c) = Expr(2) * Mat<Expr>(tw.t.psi_inv * table[c])(0, 0);
  EXPECT_TRUE(test::same_vec(q_field(tw.s, tw.t, table, e1, e1), brute));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      EXPECT_TRUE(test::same_vec(q_field(tw.s, tw.t, table, basis<Expr>(4, a), basis<Expr>(4, b)),
                                 q_field(tw.s, tw.t, table, basis<Expr>(4, b), basis<Expr>(4, a))));
}

TEST(ETensor, RoutesAgree) {
  for (const char* f : {"0", "lambda*x2", "x4^2"}) {
    const auto tw = from_hamiltonian(f);
    const auto lc = levi_civita(tw.s);
    const auto lc_h = levi_civita(twisted_structure(tw.s, tw.t));
    const auto table = gammas(tw.s, lc, tw.t);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const Vec<Expr> ea = basis<Expr>(4, a), eb = basis<Expr>(4, b);
        EXPECT_TRUE(test::same_vec(e_tensor_formula(tw.s, tw.t, table, ea, eb), e_tensor_definition(lc, lc_h, ea, eb)))
            << f << " " << a << b;
      }
  }
}

TEST(EtaP, ExampleOne) {
  const auto r = run(from_hamiltonian("lambda*x2"));
  const auto& eta = r.data.eta;
  EXPECT_TRUE(test::same_vec(eta.eta, form({"-cosh(lambda)*sinh(lambda)", "-(cosh(lambda)^2 + sinh(lambda)^2)/2", "0", "0"})));
  EXPECT_TRUE(test::all_hold(r.rs.conditions));
  EXPECT_TRUE(test::all_hold(r.rs.branch));
}

TEST(EtaP, ExampleTwo) {
  const auto r = run(from_hamiltonian("x4^2"));
  const auto& eta = r.data.eta;
  EXPECT_TRUE(test::same_vec(eta.eta, form({"0", "-exp(4*x4)/2", "0", "0"})));
  for (int j : {0, 2, 3}) EXPECT_TRUE(eta.s1(j).is_zero_constant()) << j;
  EXPECT_TRUE(test::vanishes(eta.s1(1) - ex("-exp(4*x4)/2")));
  EXPECT_TRUE(test::all_hold(r.rs.conditions));
  EXPECT_TRUE(test::all_hold(r.rs.branch));
}

TEST(EtaP, IdentityTwistMatchesUntwistedTrace) {
  const auto r = run(from_hamiltonian("5"));
  EXPECT_TRUE(test::same_vec(r.data.eta.eta, r.data.base.im_trace));
  // Not zero: the untwisted Chern connection has Im Tr(A) = -1/2 theta^2,
  // the value of the first example at lambda = 0.
  EXPECT_TRUE(test::same_vec(r.data.eta.eta, form({"0", "-1/2", "0", "0"})));
}

void expect_entry(const ComplexOneForms<Expr>& a, int i, int j, const Vec<Expr>& re, const Vec<Expr>& im) {
  EXPECT_TRUE(test::same_vec(a.real(i, j), re)) << "real part of A" << i + 1 << j + 1;
  EXPECT_TRUE(test::same_vec(a.imag(i, j), im)) << "imaginary part of A" << i + 1 << j + 1;
}

TEST(TwistedConnectionForm, ExampleOneMatrix) {
  const auto r = run(from_hamiltonian("lambda*x2"));
  const auto& a = r.data.twisted_data.a;
  const std::string c = "cosh(lambda)", s = "sinh(lambda)";
  const std::string q = "(" + c + "^2 + " + s + "^2)/4", h = c + "*" + s + "/2";
  expect_entry(a, 0, 0, form({"0", "0", "0", "0"}), form({"-" + h, "-" + c + "^2/2", "0", "0"}));
  expect_entry(a, 1, 0, form({"0", "0", "-" + q, h}), form({q, h, "0", "0"}));
  expect_entry(a, 0, 1, form({"0", "0", q, "-" + h}), form({q, h, "0", "0"}));
  expect_entry(a, 1, 1, form({"0", "0", "0", "0"}), form({"-" + h, "-" + s + "^2/2", "0", "0"}));
}

TEST(TwistedConnectionForm, ExampleTwoMatrix) {
  const auto r = run(from_hamiltonian("x4^2"));
  const auto& a = r.data.twisted_data.a;
  const std::string xi = "exp(2*x4 + 2)/4 + exp(-2*x4 - 2)", zeta = "exp(6*x4 + 2)/4 + exp(2*x4 - 2)";
  expect_entry(a, 0, 0, form({"0", "0", "0", "0"}), form({"0", "-exp(4*x4)/2", "0", "0"}));
  expect_entry(a, 0, 1, form({"0", "0", zeta, "0"}), form({xi, "0", "0", "0"}));
  expect_entry(a, 1, 0, form({"0", "0", "-(" + zeta + ")", "0"}), form({xi, "0", "0", "0"}));
  expect_entry(a, 1, 1, form({"0", "0", "0", "0"}), form({"0", "0", "0", "0"}));
}

TEST(Theorem, ExamplesAllChecksHold) {
  for (const char* f : {"lambda*x2", "x4^2"}) {
    const auto r = run(from_hamiltonian(f));
    EXPECT_TRUE(test::all_hold(r.rs.checks)) << f;
  }
}

TEST(Theorem, TwistedRicciIsMinusDEta) {
  // The exterior derivative oracle applied to eta = -exp(4 x4)/2 theta^2:
  // d eta(e2, e4) = -e4(-exp(4 x4)/2) = 2 exp(4 x4), so rho = -2 exp(4 x4) theta^2 ^ theta^4.
  const auto r = run(from_hamiltonian("x4^2"));
  const Mat<Expr>& rho = r.data.twisted_data.from_curvature.rho;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Expr want(0);
      if (i == 1 && j == 3) want = ex("-2*exp(4*x4)");
      if (i == 3 && j == 1) want = ex("2*exp(4*x4)");
      EXPECT_TRUE(test::vanishes(rho(i, j) - want)) << i << j;
    }
}

TEST(Theorem, BrokenTwistIsDetected) {
  // psi that is not g-symmetric: the twist-map axioms must fail.
  auto tw = from_hamiltonian("lambda*x2");
  tw.t.psi(0, 1) = tw.t.psi(0, 1) + ex("x1");
  TheoremResiduals<Expr> rs;
  verify_theorem(tw.s, tw.t, identity<Expr>(4), rs);
  const auto results = decide(rs.checks, test::sampling());
  ASSERT_NE(find_check(results, "psi g-symmetric"), nullptr);
  EXPECT_TRUE(find_check(results, "psi g-symmetric")->failed());
}

}  // namespace
}  // namespace akg
