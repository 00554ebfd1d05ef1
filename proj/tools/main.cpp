#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "report.hpp"

namespace {

std::pair<double, double> parse_box(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--box expects A,B");
  std::size_t used_a = 0, used_b = 0;
  const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
  const double lo = std::stod(a, &used_a), hi = std::stod(b, &used_b);
  if (used_a != a.size() || used_b != b.size() || !(lo < hi)) throw std::invalid_argument("--box expects A,B with A < B");
  return {lo, hi};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted Chern-Ricci verification on framed coordinate patches"};
  app.require_subcommand(1);
  app.set_version_flag("--version", akg::kVersion);

  std::string file;
  std::optional<int> samples;
  std::optional<double> tol;
  std::optional<std::string> seed, box, exp_mode;
  std::string format = "text";
  bool adapt = false;

  for (const char* name : {"validate", "chern-ricci", "twist", "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("file", file, "structure file")->required();
    sub->add_option("--samples", samples, "sample points per zero test")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "sampling seed (decimal or 0x hex)");
    sub->add_option("--box", box, "sampling box A,B");
    sub->add_option("--exp-mode", exp_mode, "structural | series:K | numeric");
    sub->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--adapt-frame", adapt, "Gram-Schmidt the frame before use");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    akg::RunOptions opts;
    opts.sampling.samples = samples;
    opts.sampling.tol = tol;
    if (seed) opts.sampling.seed = akg::parse_seed(*seed);
    if (box) opts.sampling.box = parse_box(*box);
    if (exp_mode) opts.exp_mode = akg::ExpMode::parse(*exp_mode);
    opts.adapt_frame = adapt;

    std::ifstream in(file, std::ios::binary);
    if (!in) throw akg::LoadError(0, "cannot open " + file);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    const akg::StructureFile sf = akg::parse_structure(bytes.str());

    akg::Report report = akg::run_command(command, sf, opts);
    report.input_sha256 = akg::sha256_hex(bytes.str());
    if (format == "json") {
      std::cout << akg::to_json(report).dump(2) << "\n";
    } else {
      std::cout << akg::to_text(report);
    }
    return report.failed() ? 2 : 0;
  } catch (const akg::LoadError& e) {
    std::cerr << file << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
