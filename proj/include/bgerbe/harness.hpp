#pragma once

// Randomised property suites and single-point evaluation behind the CLI.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bgerbe/linalg.hpp"

namespace bgerbe::harness {

struct SuiteConfig {
  std::string suite;
  int dim = 4;
  int samples = 500;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances;  // overrides keyed by check name
  int workers = 0;                           // 0: one per hardware thread
  bool timing = false;
};

struct CheckSummary {
  std::string name;
  std::string identity;
  double tolerance = 0.0;
  int samples = 0;
  double max_abs_error = 0.0;
  double mean_abs_error = 0.0;
  int failures = 0;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckSummary> checks;
  std::vector<std::string> errors;  // evaluation errors, at most a handful
  double wall_time = 0.0;
  bool pass = false;
};

std::vector<std::string> suite_names();

// Throws UnknownSuite or Config on invalid configuration.
SuiteReport run_suite(const SuiteConfig& cfg);

std::string report_to_json(const SuiteReport& r);

// Deterministic generator for sample `index` of `suite`.
Rng sample_rng(std::uint64_t seed, const std::string& suite, std::uint64_t index);

struct EvalRecord {
  cplx value;
  std::string method;
  std::optional<double> residual_vs_oracle;
  double oracle_tolerance = 0.0;  // residual above this is a check failure
  std::optional<Mat> matrix;  // projector evaluations
};

enum class Quantity { Curvature, Curving, Nu, Df, Section, Projector };
Quantity parse_quantity(const std::string& s);

// Evaluates one quantity at the point described by a JSON document.
EvalRecord eval_point(const std::string& json_text, Quantity q, const std::string& method, bool with_oracle);

std::string eval_to_json(const EvalRecord& r);

}  // namespace bgerbe::harness
