#include "akg/checks.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace akg {

namespace {

CheckResult& slot(std::vector<CheckResult>& results, std::map<std::string, std::size_t>& index,
                  const std::string& name) {
  auto [it, inserted] = index.try_emplace(name, results.size());
  if (inserted) results.push_back(CheckResult{name, "proved", 0, 0, std::nullopt, ""});
  return results[it->second];
}

}  // namespace

std::vector<CheckResult> decide(const Residuals<Expr>& residuals, const SamplingConfig& cfg) {
  std::vector<CheckResult> results;
  std::map<std::string, std::size_t> index;
  for (const auto& r : residuals) {
    CheckResult& c = slot(results, index, r.check);
    ++c.components;
    if (c.failed()) continue;
    try {
      const ZeroVerdict v = is_zero(r.value, cfg);
      if (auto* nz = std::get_if<NonZero>(&v)) {
        c.verdict = "failed";
        c.residual = std::abs(nz->value);
        c.witness = Witness{r.component, nz->witness, nz->value};
      } else if (auto* num = std::get_if<NumericallyZero>(&v)) {
        c.verdict = "numeric";
        c.residual = std::max(c.residual, num->max_residual);
      }
    } catch (const SamplingError& e) {
      c.verdict = "failed";
      c.note = r.component + ": " + e.what();
    }
  }
  return results;
}

CheckResult check_positive(const std::string& name, const std::vector<Expr>& values, const SamplingConfig& cfg) {
  CheckResult c{name, "proved", 0, static_cast<int>(values.size()), std::nullopt, ""};
  bool all_constant = true;
  std::set<std::string> syms;
  for (const auto& v : values) {
    if (auto k = v.as_number()) {
      if (*k <= 0) {
        c.verdict = "failed";
        c.witness = Witness{"", {}, k->get_d()};
        return c;
      }
    } else {
      all_constant = false;
      for (const auto& s : symbols_of(v)) syms.insert(s);
    }
  }
  if (all_constant) return c;
  c.verdict = "numeric";
  PointSampler sampler(std::vector<std::string>(syms.begin(), syms.end()), cfg);
  Point pt;
  int valid = 0;
  double smallest = INFINITY;
  while (valid < cfg.samples && sampler.next(pt)) {
    bool ok = true;
    std::vector<long double> vals;
    for (const auto& v : values) {
      auto x = try_eval(v, pt);
      if (!x) {
        ok = false;
        break;
      }
      vals.push_back(*x);
    }
    if (!ok) continue;
    ++valid;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      smallest = std::min(smallest, static_cast<double>(vals[i]));
      if (!(vals[i] > 0)) {
        c.verdict = "failed";
        c.witness = Witness{"minor " + std::to_string(i + 1), pt, static_cast<double>(vals[i])};
        return c;
      }
    }
  }
  if (valid < cfg.min_valid) {
    c.verdict = "failed";
    c.note = "too few valid sample points";
  }
  c.note = c.note.empty() ? "smallest value " + std::to_string(smallest) : c.note;
  return c;
}

void NumericEvidence::add(const Residuals<Jet>& residuals, const Point& at) {
  ++samples_;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < results_.size(); ++i) index[results_[i].name] = i;
  std::map<std::string, int> seen;
  for (const auto& r : residuals) {
    CheckResult& c = slot(results_, index, r.check);
    if (samples_ == 1 || c.components == 0) ++seen[r.check];
    if (c.verdict == "proved") c.verdict = "numeric";
    if (c.failed()) continue;
    const double a = std::abs(static_cast<double>(r.value.value()));
    if (!(a <= tol_)) {
      c.verdict = "failed";
      c.residual = a;
      c.witness = Witness{r.component, at, static_cast<double>(r.value.value())};
    } else {
      c.residual = std::max(c.residual, a);
    }
  }
  for (auto& [name, count] : seen) {
    CheckResult& c = slot(results_, index, name);
    if (c.components == 0) c.components = count;
  }
}

void NumericEvidence::add_failure(const std::string& check, const std::string& note) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < results_.size(); ++i) index[results_[i].name] = i;
  CheckResult& c = slot(results_, index, check);
  c.verdict = "failed";
  c.note = note;
}

std::vector<CheckResult> NumericEvidence::results() const { return results_; }

bool any_failed(const std::vector<CheckResult>& results) {
  return std::any_of(results.begin(), results.end(), [](const CheckResult& c) { return c.failed(); });
}

const CheckResult* find_check(const std::vector<CheckResult>& results, const std::string& name) {
  for (const auto& c : results) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace akg
