#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "akg/scalar.hpp"
#include "akg/twist.hpp"
#include "akg/zero_test.hpp"

namespace akg {

/// Malformed or inconsistent input. line is 1-based, 0 when the problem is
/// not tied to a line.
class LoadError : public std::runtime_error {
 public:
  LoadError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct TwistSpec {
  std::optional<Expr> f;
  std::optional<Mat<Expr>> psi;
  std::optional<Mat<Expr>> psi_inv;
  ExpMode mode = ExpMode::structural();
};

/// Sampling fields set by the file; unset fields keep the defaults.
struct SamplingOverrides {
  std::optional<int> samples;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::pair<double, double>> box;
  std::optional<int> min_valid;

  void apply_to(SamplingConfig& cfg) const;
};

struct StructureFile {
  Context ctx;
  int dimension = 0;
  Mat<Expr> frame;  // column j holds e_j in coordinates
  Mat<Expr> metric;
  bool explicit_metric = false;
  Mat<Expr> J;
  std::optional<TwistSpec> twist;
  SamplingOverrides sampling;
};

StructureFile parse_structure(const std::string& text);
StructureFile load_structure(const std::string& path);

/// "0xAC0FFEE" or decimal.
std::uint64_t parse_seed(const std::string& text);

}  // namespace akg
