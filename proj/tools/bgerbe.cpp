#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bgerbe/error.hpp"
#include "bgerbe/harness.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kInputError = 2;

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      bgerbe::fail(bgerbe::ErrorKind::Config, "--tol expects key=value, got '" + item + "'");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() - eq - 1) {
      bgerbe::fail(bgerbe::ErrorKind::Config, "--tol value is not a number in '" + item + "'");
    }
    out[item.substr(0, eq)] = v;
  }
  return out;
}

int run_verify(const bgerbe::harness::SuiteConfig& base, const std::vector<std::string>& tols,
               const std::string& report_path) {
  auto cfg = base;
  cfg.tolerances = parse_tolerances(tols);
  const auto report = bgerbe::harness::run_suite(cfg);
  const std::string text = bgerbe::harness::report_to_json(report) + "\n";
  if (report_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) bgerbe::fail(bgerbe::ErrorKind::Config, "cannot write report to " + report_path);
    out << text;
  }
  for (const auto& c : report.checks) {
    std::cerr << (c.failures == 0 ? "ok   " : "FAIL ") << c.name << "  max " << c.max_abs_error << "  tol "
              << c.tolerance << "  n " << c.samples << "\n";
  }
  for (const auto& e : report.errors) std::cerr << "error " << e << "\n";
  return report.pass ? kPass : kCheckFailure;
}

int run_eval(const std::string& input, const std::string& quantity, const std::string& method, bool no_oracle) {
  std::ifstream in(input, std::ios::binary);
  if (!in) bgerbe::fail(bgerbe::ErrorKind::Config, "cannot read " + input);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto rec = bgerbe::harness::eval_point(buf.str(), bgerbe::harness::parse_quantity(quantity), method, !no_oracle);
  std::cout << bgerbe::harness::eval_to_json(rec) << "\n";
  if (rec.residual_vs_oracle && !(*rec.residual_vs_oracle <= rec.oracle_tolerance)) return kCheckFailure;
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for the basic bundle gerbe on U(n)"};
  app.require_subcommand(1);

  bgerbe::harness::SuiteConfig cfg;
  std::vector<std::string> tols;
  std::string report_path;
  auto* verify = app.add_subcommand("verify", "run a randomised property suite");
  verify->add_option("--suite", cfg.suite, "suite name")->required();
  verify->add_option("--dim", cfg.dim, "matrix size");
  verify->add_option("--samples", cfg.samples, "number of samples");
  verify->add_option("--seed", cfg.seed, "64-bit seed");
  verify->add_option("--tol", tols, "per-check tolerance override, key=value");
  verify->add_option("--report", report_path, "JSON report path, '-' for stdout")->required();
  verify->add_option("--workers", cfg.workers, "worker threads, 0 for one per core");
  verify->add_flag("--timing", cfg.timing, "include wall time in the report");

  std::string input;
  std::string quantity;
  std::string method = "residue";
  bool no_oracle = false;
  auto* eval = app.add_subcommand("eval", "evaluate one quantity at a point");
  eval->add_option("--input", input, "JSON point file")->required();
  eval->add_option("--quantity", quantity, "quantity")
      ->required()
      ->check(CLI::IsMember({"curvature", "curving", "nu", "df", "section", "projector"}));
  eval->add_option("--method", method, "method")->check(CLI::IsMember({"residue", "quadrature", "fd"}));
  eval->add_flag("--no-oracle", no_oracle, "skip the cross-check");

  app.add_subcommand("suites", "list suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*verify) return run_verify(cfg, tols, report_path);
    if (*eval) return run_eval(input, quantity, method, no_oracle);
    for (const auto& s : bgerbe::harness::suite_names()) std::cout << s << "\n";
    return kPass;
  } catch (const bgerbe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
