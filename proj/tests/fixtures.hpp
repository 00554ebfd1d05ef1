#pragma once

#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "akg/almost_kahler.hpp"
#include "akg/checks.hpp"
#include "akg/linalg.hpp"

namespace akg::test {

inline Context chart() { return Context({"x1", "x2", "x3", "x4"}, {"lambda", "mu"}); }

inline Mat<Expr> matrix(const Context& ctx, const std::vector<std::vector<std::string>>& rows) {
  Mat<Expr> m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = normalize(parse(rows[i][j], ctx));
  return m;
}

inline Vec<Expr> vec(const Context& ctx, const std::vector<std::string>& xs) {
  Vec<Expr> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v(i) = normalize(parse(xs[i], ctx));
  return v;
}

inline Expr ex(const std::string& s, const Context& ctx = chart()) { return normalize(parse(s, ctx)); }

// Left-invariant frame on the Heisenberg group times R (columns are e1..e4).
inline Mat<Expr> heisenberg_frame(const Context& ctx) {
  return matrix(ctx, {{"1", "0", "0", "0"}, {"0", "x1", "1", "0"}, {"0", "1", "0", "0"}, {"0", "0", "0", "1"}});
}

// Je1 = e3, Je2 = e4, Je3 = -e1, Je4 = -e2.
inline Mat<Expr> heisenberg_j(const Context& ctx) {
  return matrix(ctx, {{"0", "0", "-1", "0"}, {"0", "0", "0", "-1"}, {"1", "0", "0", "0"}, {"0", "1", "0", "0"}});
}

inline std::shared_ptr<const FramedPatch<Expr>> make_patch(const Context& ctx, const Mat<Expr>& frame) {
  return std::make_shared<const FramedPatch<Expr>>(Calculus<Expr>{ctx}, frame);
}

inline AKStructure<Expr> heisenberg() {
  const Context ctx = chart();
  return make_structure(make_patch(ctx, heisenberg_frame(ctx)), identity<Expr>(4), heisenberg_j(ctx));
}

inline AKStructure<Expr> flat_kahler() {
  const Context ctx = chart();
  return make_structure(make_patch(ctx, identity<Expr>(4)), identity<Expr>(4), heisenberg_j(ctx));
}

inline SamplingConfig sampling() { return SamplingConfig{}; }

inline ::testing::AssertionResult vanishes(const Expr& e, const SamplingConfig& cfg = sampling()) {
  const ZeroVerdict v = is_zero(e, cfg);
  if (holds_zero(v)) return ::testing::AssertionSuccess();
  const auto& nz = std::get<NonZero>(v);
  return ::testing::AssertionFailure() << to_string(e) << " is nonzero (" << nz.value << ")";
}

inline ::testing::AssertionResult all_hold(const Residuals<Expr>& rs, const SamplingConfig& cfg = sampling()) {
  const auto results = decide(rs, cfg);
  for (const auto& c : results) {
    if (c.failed()) {
      auto f = ::testing::AssertionFailure() << c.name << " failed";
      if (c.witness) f << " at " << c.witness->component << " value " << c.witness->value;
      if (!c.note.empty()) f << " (" << c.note << ")";
      return f;
    }
  }
  return ::testing::AssertionSuccess();
}

inline ::testing::AssertionResult same_vec(const Vec<Expr>& a, const Vec<Expr>& b) {
  if (a.size() != b.size()) return ::testing::AssertionFailure() << "size mismatch";
  for (int i = 0; i < a.size(); ++i) {
    auto r = vanishes(a(i) - b(i));
    if (!r) return r << " at component " << i + 1;
  }
  return ::testing::AssertionSuccess();
}

inline ::testing::AssertionResult same_mat(const Mat<Expr>& a, const Mat<Expr>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return ::testing::AssertionFailure() << "shape mismatch";
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      auto r = vanishes(a(i, j) - b(i, j));
      if (!r) return r << " at entry (" << i + 1 << "," << j + 1 << ")";
    }
  return ::testing::AssertionSuccess();
}

}  // namespace akg::test
