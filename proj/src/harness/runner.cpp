#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "bgerbe/error.hpp"
#include "json.hpp"
#include "registry.hpp"

namespace bgerbe::harness {

namespace {

constexpr std::size_t kMaxErrors = 8;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const SuiteDef& lookup(const std::string& name) {
  for (const auto& s : registry()) {
    if (s.name == name) return s;
  }
  fail(ErrorKind::UnknownSuite, "unknown suite '" + name + "'");
}

struct SampleResult {
  std::vector<std::pair<std::size_t, double>> obs;
  std::optional<std::string> error;
};

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : registry()) out.push_back(s.name);
  return out;
}

Rng sample_rng(std::uint64_t seed, const std::string& suite, std::uint64_t index) {
  return Rng(splitmix(splitmix(seed ^ fnv1a(suite)) ^ index));
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  const SuiteDef& def = lookup(cfg.suite);
  if (cfg.dim < 1) fail(ErrorKind::Config, "dim must be positive");
  if (cfg.samples < 1) fail(ErrorKind::Config, "samples must be positive");
  std::vector<CheckDef> checks = def.checks;
  for (const auto& [key, val] : cfg.tolerances) {
    auto it = std::find_if(checks.begin(), checks.end(), [&](const CheckDef& c) { return c.name == key; });
    if (it == checks.end()) fail(ErrorKind::Config, "tolerance for unknown check '" + key + "'");
    if (!(val >= 0.0)) fail(ErrorKind::Config, "tolerance for '" + key + "' must be non-negative");
    it->tolerance = val;
  }

  const auto start = std::chrono::steady_clock::now();
  std::vector<SampleResult> results(static_cast<std::size_t>(cfg.samples));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < cfg.samples; i = next++) {
      SampleContext ctx(checks, cfg.dim, static_cast<std::uint64_t>(i),
                        sample_rng(cfg.seed, cfg.suite, static_cast<std::uint64_t>(i)));
      auto& out = results[static_cast<std::size_t>(i)];
      try {
        def.run(ctx);
      } catch (const std::exception& e) {
        out.error = "sample " + std::to_string(i) + ": " + e.what();
      }
      out.obs = ctx.observations();
    }
  };
  int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, cfg.samples);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  SuiteReport rep;
  rep.config = cfg;
  rep.config.tolerances.clear();
  for (const auto& c : checks) rep.config.tolerances[c.name] = c.tolerance;
  std::vector<double> sums(checks.size(), 0.0);
  for (const auto& c : checks) rep.checks.push_back({c.name, c.identity, c.tolerance, 0, 0.0, 0.0, 0});
  int error_count = 0;
  for (const auto& r : results) {
    for (const auto& [k, err] : r.obs) {
      auto& s = rep.checks[k];
      ++s.samples;
      const bool bad = !(err <= s.tolerance);
      if (bad) ++s.failures;
      s.max_abs_error = std::isfinite(err) ? std::max(s.max_abs_error, err) : err;
      sums[k] += err;
    }
    if (r.error) {
      ++error_count;
      if (rep.errors.size() < kMaxErrors) rep.errors.push_back(*r.error);
    }
  }
  if (error_count > static_cast<int>(kMaxErrors)) {
    rep.errors.push_back(std::to_string(error_count - static_cast<int>(kMaxErrors)) + " further errors");
  }
  rep.pass = error_count == 0;
  for (std::size_t k = 0; k < rep.checks.size(); ++k) {
    auto& s = rep.checks[k];
    if (s.samples > 0) s.mean_abs_error = sums[k] / s.samples;
    if (s.failures > 0) rep.pass = false;
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string report_to_json(const SuiteReport& r) {
  using nlohmann::json;
  auto num = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"identity", c.identity},
                      {"tolerance", c.tolerance},
                      {"samples", c.samples},
                      {"max_abs_error", num(c.max_abs_error)},
                      {"mean_abs_error", num(c.mean_abs_error)},
                      {"failures", c.failures}});
  }
  json j = {{"suite", r.config.suite},
            {"dim", r.config.dim},
            {"samples", r.config.samples},
            {"seed", r.config.seed},
            {"tolerances", r.config.tolerances},
            {"checks", checks},
            {"errors", r.errors},
            {"pass", r.pass}};
  if (r.config.timing) j["wall_time"] = r.wall_time;
  return j.dump(2);
}

}  // namespace bgerbe::harness
