#include "report.hpp"

#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace akg {

using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

namespace {

json check_json(const CheckResult& c) {
  json j = {{"name", c.name}, {"verdict", c.verdict}, {"residual", c.residual}, {"components", c.components}};
  if (c.witness) {
    json point = json::object();
    for (const auto& [k, v] : c.witness->point) point[k] = v;
    j["witness"] = {{"component", c.witness->component}, {"point", point}, {"value", c.witness->value}};
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

// a theta^1 + b theta^2 ..., zero terms dropped.
std::string one_form(const std::vector<std::string>& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == "0") continue;
    if (!out.empty()) out += " + ";
    out += "(" + c[i] + ") theta" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

void two_form(std::ostringstream& out, const std::string& title, const std::vector<std::vector<std::string>>& rows) {
  out << title << ":\n";
  bool any = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      if (rows[i][k] == "0") continue;
      any = true;
      out << "  theta" << i + 1 << "^theta" << i + k + 2 << ": " << rows[i][k] << "\n";
    }
  }
  if (!any) out << "  0\n";
}

void matrix(std::ostringstream& out, const std::string& title, const std::vector<std::vector<std::string>>& m) {
  out << title << ":\n";
  for (const auto& row : m) {
    out << "  [";
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? ", " : "") << row[j];
    out << "]\n";
  }
}

}  // namespace

json to_json(const Report& r) {
  json j;
  j["command"] = r.command;
  j["checks"] = json::array();
  for (const auto& c : r.checks) j["checks"].push_back(check_json(c));
  if (!r.im_trace.empty()) j["im_trace"] = r.im_trace;
  if (!r.rho.empty()) j["rho"] = r.rho;
  if (!r.psi.empty()) {
    j["psi"] = r.psi;
    j["psi_inv"] = r.psi_inv;
  }
  if (!r.exp_mode.empty()) {
    j["exp_mode"] = r.exp_mode;
    j["approximate"] = r.approximate;
  }
  if (r.command == "verify") {
    j["eta_p"] = r.eta_p;
    j["s1"] = r.s1;
    j["im_trace_twisted"] = r.im_trace_twisted;
    j["rho_twisted"] = r.rho_twisted;
    j["conditions"] = {{"i", r.condition_i ? check_json(*r.condition_i) : json()},
                       {"ii", r.condition_ii ? check_json(*r.condition_ii) : json()}};
  }
  if (r.numeric_points > 0) j["numeric_points"] = r.numeric_points;
  j["notes"] = r.notes;
  j["timing_ms"] = r.timing_ms;
  j["version"] = r.version;
  j["input_sha256"] = r.input_sha256;
  return j;
}

std::string to_text(const Report& r) {
  std::ostringstream out;
  out << "akg " << r.version << "  " << r.command << "  sha256 " << r.input_sha256.substr(0, 16) << "\n\n";
  std::size_t width = 0;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  auto line = [&](const CheckResult& c) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << c.name << "  " << std::setw(8) << c.verdict;
    if (c.verdict != "proved") out << std::scientific << std::setprecision(2) << c.residual << std::defaultfloat;
    out << "\n";
    if (c.witness) {
      out << "    witness " << c.witness->component << " = " << c.witness->value;
      if (!c.witness->point.empty()) out << " at";
      for (const auto& [k, v] : c.witness->point) out << " " << k << "=" << v;
      out << "\n";
    }
    if (!c.note.empty()) out << "    " << c.note << "\n";
  };
  out << "checks:\n";
  for (const auto& c : r.checks) line(c);
  if (!r.exp_mode.empty()) out << "\nexp mode: " << r.exp_mode << (r.approximate ? " (approximate)" : "") << "\n";
  if (!r.psi.empty()) matrix(out, "\npsi", r.psi);
  if (!r.im_trace.empty()) out << "\nIm Tr(A) = " << one_form(r.im_trace) << "\n";
  if (!r.rho.empty()) two_form(out, "rho_D", r.rho);
  if (r.command == "verify" && !r.eta_p.empty()) {
    out << "\neta_P = " << one_form(r.eta_p) << "\n";
    out << "Im Tr(A~) = " << one_form(r.im_trace_twisted) << "\n";
    two_form(out, "rho_D~", r.rho_twisted);
  }
  if (r.condition_i) {
    out << "\nconditions:\n";
    line(*r.condition_i);
    line(*r.condition_ii);
  }
  if (r.numeric_points > 0) out << "\nnumeric points: " << r.numeric_points << "\n";
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  out << "\n" << (r.failed() ? "FAILED" : "OK") << "  (" << std::fixed << std::setprecision(1) << r.timing_ms
      << " ms)\n";
  return out.str();
}

}  // namespace akg
