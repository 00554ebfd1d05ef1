#pragma once

#include <optional>
#include <string>
#include <vector>

#include "akg/checks.hpp"
#include "structure_file.hpp"

namespace akg {

inline constexpr const char* kVersion = "0.1.0";

/// Bad input that only shows up once the structure is assembled (degenerate
/// frame, singular metric, no twist section, unsupported structural exp).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  SamplingOverrides sampling;  // command-line flags, applied after the file
  std::optional<ExpMode> exp_mode;
  bool adapt_frame = false;
};

struct Report {
  std::string command;
  std::vector<CheckResult> checks;
  // Untwisted Chern-Ricci data.
  std::vector<std::string> im_trace;
  std::vector<std::vector<std::string>> rho;  // strictly upper triangle, row i holds (i, j > i)
  // Twist data.
  std::vector<std::vector<std::string>> psi;
  std::vector<std::vector<std::string>> psi_inv;
  bool approximate = false;
  // Theorem data.
  std::vector<std::string> eta_p;
  std::vector<std::string> s1;
  std::vector<std::string> im_trace_twisted;
  std::vector<std::vector<std::string>> rho_twisted;
  std::optional<CheckResult> condition_i;
  std::optional<CheckResult> condition_ii;

  std::string exp_mode;
  int numeric_points = 0;  // jet evaluation points, numeric mode only
  std::vector<std::string> notes;
  double timing_ms = 0;
  std::string version = kVersion;
  std::string input_sha256;

  bool failed() const { return any_failed(checks); }
};

/// validate, chern-ricci, twist or verify. Throws InputError or LoadError.
Report run_command(const std::string& command, const StructureFile& file, const RunOptions& opts);

SamplingConfig sampling_for(const StructureFile& file, const RunOptions& opts);

}  // namespace akg
