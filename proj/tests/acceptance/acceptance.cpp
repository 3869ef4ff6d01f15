// Acceptance run: every criterion over n = 2..6 with 500 samples per check.
// Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "bgerbe/harness.hpp"

namespace {

using bgerbe::harness::CheckSummary;
using bgerbe::harness::SuiteConfig;
using bgerbe::harness::SuiteReport;

struct PinnedCheck {
  std::string suite;
  std::string check;
  double tolerance;
  int min_samples;  // per dimension
};

struct Criterion {
  int number;
  std::string title;
  std::vector<PinnedCheck> checks;
};

constexpr int kSamples = 500;
constexpr std::uint64_t kSeed = 20240601;
constexpr int kMinDim = 2;
constexpr int kMaxDim = 6;

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "projector correctness",
       {{"projectors", "projector.residue_vs_quadrature", 1e-10, 500},
        {"projectors", "projector.trace_integer", 1e-10, 500},
        {"projectors", "projector.idempotent", 1e-10, 500},
        {"projectors", "projector.mutual_orthogonality", 1e-10, 500}}},
      {2, "projector derivative",
       {{"derivative", "dP.residue_vs_fd", 1e-6, 500}, {"derivative", "dP.pdpp", 1e-10, 500}}},
      {3, "curvature three-route agreement",
       {{"curvature-equivalence", "curvature.projectors_vs_residue", 1e-8, 500},
        {"curvature-equivalence", "curvature.quadrature_vs_residue", 1e-8, 500},
        {"curvature-equivalence", "curvature.projectors_vs_quadrature", 1e-8, 500}}},
      {4, "projector-inserted integral equals the curvature",
       {{"curvature-equivalence", "curvature.inserted_vs_contour", 1e-9, 500}}},
      {5, "curving well defined",
       {{"curving", "curving.residue_vs_quadrature", 1e-9, 500},
        {"curving", "curving.contour_deformation", 1e-10, 500},
        {"curving", "curving.z_derivative", 1e-6, 500}}},
      {6, "difference of curvings equals the curvature on every stratum",
       {{"delta-curving", "delta.positive", 1e-8, 160},
        {"delta-curving", "delta.null", 1e-8, 160},
        {"delta-curving", "delta.null_curvature", 0.0, 160},
        {"delta-curving", "delta.negative", 1e-8, 160},
        {"delta-curving", "delta.swap", 1e-8, 160}}},
      {7, "three-curvature",
       {{"three-curvature", "df.fd_vs_omega", 1e-4, 100},
        {"three-curvature", "df.closed_vs_nu", 1e-9, 500},
        {"three-curvature", "df.closed_vs_raw_nu", 1e-9, 500},
        {"three-curvature", "df.closed_z_independence", 1e-12, 500}}},
      {8, "gerbe axioms",
       {{"gerbe-axioms", "section.unit_norm", 1e-10, 500},
        {"gerbe-axioms", "section.antisymmetry", 1e-9, 500},
        {"gerbe-axioms", "associativity.type11", 1e-9, 1},
        {"gerbe-axioms", "associativity.type10", 1e-9, 1},
        {"gerbe-axioms", "associativity.type01", 1e-9, 1},
        {"gerbe-axioms", "associativity.type00", 1e-9, 1},
        {"gerbe-axioms", "line.dual_pairing", 1e-9, 500}}},
      {9, "equivariance",
       {{"equivariance", "equivariance.projector", 1e-9, 500},
        {"equivariance", "equivariance.product", 1e-9, 500},
        {"equivariance", "equivariance.fiber_norm", 1e-9, 500},
        {"equivariance", "equivariance.section", 1e-9, 500},
        {"equivariance", "weyl_map.product", 1e-9, 500}}},
      {10, "Weyl map",
       {{"weyl", "weyl.preimage_count", 0.0, 500},
        {"weyl", "weyl.mc_pullback", 1e-10, 500},
        {"weyl", "weyl.raw_vs_simplified", 1e-9, 500},
        {"weyl", "weyl.curving_closed_vs_eval", 1e-8, 500}}},
      {11, "block-embedding invariance",
       {{"truncation", "truncation.curvature", 1e-10, 500},
        {"truncation", "truncation.inserted", 1e-10, 500},
        {"truncation", "truncation.curving", 1e-10, 500},
        {"truncation", "truncation.delta", 1e-10, 500},
        {"truncation", "truncation.nu", 1e-10, 500},
        {"truncation", "truncation.projector", 1e-10, 500}}},
  };
  return c;
}

}  // namespace

int main() {
  // One report per (suite, dim), with every pinned tolerance applied.
  std::map<std::string, std::map<std::string, double>> pins;
  for (const auto& c : criteria()) {
    for (const auto& p : c.checks) pins[p.suite][p.check] = p.tolerance;
  }
  std::map<std::pair<std::string, int>, SuiteReport> reports;
  for (const auto& [suite, tols] : pins) {
    for (int n = kMinDim; n <= kMaxDim; ++n) {
      SuiteConfig cfg;
      cfg.suite = suite;
      cfg.dim = n;
      cfg.samples = kSamples;
      cfg.seed = kSeed;
      cfg.tolerances = tols;
      reports[{suite, n}] = bgerbe::harness::run_suite(cfg);
    }
  }

  int failed = 0;
  for (const auto& c : criteria()) {
    bool ok = true;
    std::string detail;
    double worst_ratio = 0.0;
    for (const auto& p : c.checks) {
      for (int n = kMinDim; n <= kMaxDim; ++n) {
        const SuiteReport& r = reports.at({p.suite, n});
        for (const auto& e : r.errors) {
          ok = false;
          detail += " [" + p.suite + " n=" + std::to_string(n) + " error: " + e + "]";
        }
        const CheckSummary* s = nullptr;
        for (const auto& cs : r.checks) {
          if (cs.name == p.check) s = &cs;
        }
        if (!s) {
          ok = false;
          detail += " [" + p.check + " missing]";
          continue;
        }
        if (s->failures > 0 || s->samples < p.min_samples) {
          ok = false;
          char buf[256];
          std::snprintf(buf, sizeof buf, " [%s n=%d: %d/%d failed, max %.3g, tol %.3g]", p.check.c_str(), n,
                        s->failures, s->samples, s->max_abs_error, p.tolerance);
          detail += buf;
        }
        if (p.tolerance > 0.0) worst_ratio = std::max(worst_ratio, s->max_abs_error / p.tolerance);
      }
    }
    if (!ok) ++failed;
    std::printf("criterion %2d %-62s %s  (worst error/tolerance %.2e)%s\n", c.number, c.title.c_str(),
                ok ? "PASS" : "FAIL", worst_ratio, detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria().size()) - failed, criteria().size());
  return failed == 0 ? 0 : 1;
}
