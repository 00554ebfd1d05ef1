#pragma once

#include <optional>
#include <string>
#include <vector>

#include "akg/residual.hpp"
#include "akg/zero_test.hpp"

namespace akg {

struct Witness {
  std::string component;
  Point point;
  double value = 0;
};

/// Aggregated outcome of one named check over all of its components.
/// verdict is "proved" when every component normalized to zero, "numeric"
/// when some needed sampling, "failed" otherwise.
struct CheckResult {
  std::string name;
  std::string verdict;
  double residual = 0;
  int components = 0;
  std::optional<Witness> witness;
  std::string note;

  bool failed() const { return verdict == "failed"; }
};

/// Zero-tests every residual and groups them by check name, keeping the
/// order in which check names first appear.
std::vector<CheckResult> decide(const Residuals<Expr>& residuals, const SamplingConfig& cfg);

/// Every value must be strictly positive wherever it is defined.
CheckResult check_positive(const std::string& name, const std::vector<Expr>& values, const SamplingConfig& cfg);

/// Collects residuals from jet pipelines evaluated at many points. A check
/// fails at the first point where some component exceeds tol.
class NumericEvidence {
 public:
  explicit NumericEvidence(double tol) : tol_(tol) {}

  void add(const Residuals<Jet>& residuals, const Point& at);
  void add_failure(const std::string& check, const std::string& note);
  int samples() const { return samples_; }
  std::vector<CheckResult> results() const;

 private:
  double tol_;
  int samples_ = 0;
  std::vector<CheckResult> results_;
};

bool any_failed(const std::vector<CheckResult>& results);

const CheckResult* find_check(const std::vector<CheckResult>& results, const std::string& name);

}  // namespace akg
