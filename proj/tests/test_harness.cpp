#include "bgerbe/harness.hpp"
#include "bgerbe/json_io.hpp"
#include "test_util.hpp"

using namespace bgerbe;
using namespace bgerbe::harness;
using namespace testing;

namespace {
const char* kCurvaturePoint = R"({
  "g": {"dim": 2, "re": [[0, 0], [0, 0]], "im": [[1, 0], [0, -1]]},
  "z1": [-0.7071067811865476, 0.7071067811865476],
  "z2": 0.7853981633974483,
  "tangents": [
    {"dim": 2, "re": [[0, 1], [-1, 0]], "im": [[0, 0], [0, 0]]},
    {"dim": 2, "re": [[0, 0], [0, 0]], "im": [[0, 1], [1, 0]]}
  ]
})";
}  // namespace

TEST_CASE("suite reports are deterministic") {
  SuiteConfig cfg;
  cfg.suite = "gerbe-axioms";
  cfg.dim = 2;
  cfg.samples = 10;
  cfg.seed = 99;
  cfg.workers = 1;
  const auto a = run_suite(cfg);
  CHECK(a.pass);
  cfg.workers = 3;
  const auto b = run_suite(cfg);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(report_to_json(a).find("wall_time") == std::string::npos);
  for (const auto& c : a.checks) CHECK_FALSE(c.identity.empty());
}

TEST_CASE("tolerance overrides reach the checks") {
  SuiteConfig cfg;
  cfg.suite = "delta-curving";
  cfg.dim = 3;
  cfg.samples = 12;
  cfg.tolerances["delta.positive"] = 0.0;
  const auto r = run_suite(cfg);
  CHECK_FALSE(r.pass);
  for (const auto& c : r.checks) {
    if (c.name == "delta.positive") {
      CHECK(c.failures > 0);
      CHECK(c.tolerance == 0.0);
    }
  }
}

TEST_CASE("configuration errors") {
  SuiteConfig cfg;
  cfg.suite = "no-such-suite";
  CHECK(error_kind([&] { run_suite(cfg); }) == ErrorKind::UnknownSuite);
  cfg.suite = "truncation";
  cfg.dim = 0;
  CHECK(error_kind([&] { run_suite(cfg); }) == ErrorKind::Config);
  cfg.dim = 2;
  cfg.samples = 0;
  CHECK(error_kind([&] { run_suite(cfg); }) == ErrorKind::Config);
  cfg.samples = 2;
  cfg.tolerances["not.a.check"] = 1.0;
  CHECK(error_kind([&] { run_suite(cfg); }) == ErrorKind::Config);
}

TEST_CASE("every listed suite runs") {
  for (const auto& name : suite_names()) {
    SuiteConfig cfg;
    cfg.suite = name;
    cfg.dim = 3;
    cfg.samples = 5;
    const auto r = run_suite(cfg);
    INFO(name);
    CHECK(r.errors.empty());
    CHECK(r.pass);
  }
}

TEST_CASE("sample generators") {
  Rng a = sample_rng(1, "weyl", 3);
  Rng b = sample_rng(1, "weyl", 3);
  Rng c = sample_rng(1, "weyl", 4);
  Rng d = sample_rng(1, "truncation", 3);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("eval of the fixed curvature point") {
  for (const char* m : {"residue", "quadrature"}) {
    const auto r = eval_point(kCurvaturePoint, Quantity::Curvature, m, true);
    CHECK(std::abs(r.value - cplx(0.0, -0.5)) < 1e-12);
    REQUIRE(r.residual_vs_oracle);
    CHECK(*r.residual_vs_oracle < 1e-12);
  }
  const auto fd = eval_point(kCurvaturePoint, Quantity::Curvature, "fd", true);
  CHECK(std::abs(fd.value - cplx(0.0, -0.5)) < 1e-4);
  const auto no = eval_point(kCurvaturePoint, Quantity::Curvature, "residue", false);
  CHECK_FALSE(no.residual_vs_oracle);
  const auto p = eval_point(kCurvaturePoint, Quantity::Projector, "residue", true);
  REQUIRE(p.matrix);
  CHECK(std::abs(p.value - 1.0) < 1e-14);
  const std::string out = eval_to_json(p);
  CHECK(out.find("value_re") != std::string::npos);
  CHECK(out.find("residual_vs_oracle") != std::string::npos);
}

TEST_CASE("eval of nu in one dimension") {
  const char* point = R"({"g": {"dim": 1, "re": [[0]], "im": [[1]]},
    "tangents": [{"dim": 1, "re": [[0]], "im": [[0.5]]}, {"dim": 1, "re": [[0]], "im": [[1]]},
                 {"dim": 1, "re": [[0]], "im": [[-2]]}]})";
  const auto r = eval_point(point, Quantity::Nu, "residue", true);
  CHECK(r.value == cplx(0.0));
}

TEST_CASE("eval input errors name the offending path") {
  auto message = [](const std::string& text) {
    try {
      eval_point(text, Quantity::Curvature, "residue", true);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Schema);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\"g\": ").find("$") != std::string::npos);
  CHECK(message(R"({"g": {"dim": 2, "re": [[0, 0], [0]], "im": [[1, 0], [0, -1]]}})").find("$.g.re[1]") != std::string::npos);
  CHECK(message(R"({"g": {"dim": 2, "re": [[0, 0], [0, "x"]]}})").find("$.g.re[1][1]") != std::string::npos);
  CHECK(message(R"({"h": 1})").find("$.g") != std::string::npos);
  std::string no_z2 = kCurvaturePoint;
  no_z2.replace(no_z2.find("\"z2\""), 4, "\"zz\"");
  CHECK(message(no_z2).find("$.z2") != std::string::npos);
}

TEST_CASE("eval method availability") {
  CHECK(error_kind([] { eval_point(kCurvaturePoint, Quantity::Curving, "fd", true); }) == ErrorKind::Config);
  CHECK(error_kind([] { parse_quantity("holonomy"); }) == ErrorKind::Config);
}

TEST_CASE("json matrix round trip") {
  Mat m(2, 2);
  m << cplx(1, 2), cplx(3, 4), cplx(5, 6), cplx(7, 8);
  CHECK(json_io::read_matrix(json_io::write_matrix(m), "$") == m);
  CHECK(std::abs(json_io::read_cut(json_io::json(3.0), "$").angle() - 3.0) < 1e-15);
  CHECK(error_kind([] { json_io::read_cut(json_io::json(0.0), "$"); }) == ErrorKind::Schema);
}
