#include <cmath>
#include <numbers>

#include "bgerbe/error.hpp"
#include "bgerbe/fibers.hpp"
#include "bgerbe/forms.hpp"
#include "bgerbe/harness.hpp"
#include "bgerbe/json_io.hpp"

namespace bgerbe::harness {

namespace {

using json_io::json;

constexpr double kOracleTol = 1e-8;
constexpr double kFdOracleTol = 1e-4;
const cplx kTwoPiI(0.0, 2.0 * std::numbers::pi);

struct Point {
  std::optional<UnitaryMatrix> g;
  std::optional<json_io::FlagTorusInput> flag;
  json doc;

  const UnitaryMatrix& group() const { return *g; }

  CutPoint cut(const char* key) const {
    if (!doc.contains(key)) fail(ErrorKind::Schema, std::string("$.") + key + ": missing");
    return json_io::read_cut(doc[key], std::string("$.") + key);
  }

  std::vector<TangentVector> tangents(std::size_t needed) const {
    if (!doc.contains("tangents") || !doc["tangents"].is_array()) fail(ErrorKind::Schema, "$.tangents: missing");
    const auto& t = doc["tangents"];
    if (t.size() < needed) fail(ErrorKind::Schema, "$.tangents: need " + std::to_string(needed) + " tangents");
    std::vector<TangentVector> out;
    for (std::size_t i = 0; i < needed; ++i) {
      const std::string path = "$.tangents[" + std::to_string(i) + "]";
      const Mat a = json_io::read_matrix(t[i], path);
      if (a.rows() != g->dim()) fail(ErrorKind::Schema, path + ": dimension differs from g");
      out.emplace_back(*g, a);
    }
    return out;
  }

  const std::vector<FlagTangent>& flag_tangents(std::size_t needed) const {
    if (flag->tangents.size() < needed) fail(ErrorKind::Schema, "$.dP: need " + std::to_string(needed) + " tangents");
    for (const auto& t : flag->tangents) validate_tangent(flag->point, t);
    return flag->tangents;
  }
};

Point parse(const std::string& text) {
  Point p;
  try {
    p.doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Schema, std::string("$: malformed JSON: ") + e.what());
  }
  if (!p.doc.is_object()) fail(ErrorKind::Schema, "$: expected an object");
  if (p.doc.contains("lambda")) {
    p.flag = json_io::read_flag_torus(p.doc, "$");
    validate_point(p.flag->point);
    p.g = weyl_apply(p.flag->point);
  } else {
    if (!p.doc.contains("g")) fail(ErrorKind::Schema, "$.g: missing");
    p.g = UnitaryMatrix(json_io::read_matrix(p.doc["g"], "$.g"));
  }
  return p;
}

Method parse_method(const std::string& s) {
  if (s == "residue") return Method::Residue;
  if (s == "quadrature") return Method::Quadrature;
  if (s == "fd") return Method::FiniteDifference;
  fail(ErrorKind::Config, "unknown method '" + s + "'");
}

[[noreturn]] void unsupported(Quantity q, Method m) {
  static const char* names[] = {"curvature", "curving", "nu", "df", "section", "projector"};
  fail(ErrorKind::Config, std::string("method ") + to_string(m) + " is not available for " +
                              names[static_cast<int>(q)]);
}

double residual(cplx a, cplx b) { return std::abs(a - b); }

}  // namespace

Quantity parse_quantity(const std::string& s) {
  if (s == "curvature") return Quantity::Curvature;
  if (s == "curving") return Quantity::Curving;
  if (s == "nu") return Quantity::Nu;
  if (s == "df") return Quantity::Df;
  if (s == "section") return Quantity::Section;
  if (s == "projector") return Quantity::Projector;
  fail(ErrorKind::Config, "unknown quantity '" + s + "'");
}

EvalRecord eval_point(const std::string& json_text, Quantity q, const std::string& method_name, bool with_oracle) {
  const Method m = parse_method(method_name);
  const Point p = parse(json_text);
  EvalRecord r;
  r.method = method_name;
  r.oracle_tolerance = kOracleTol;
  const auto spec = share(spectral_decompose(p.group()));

  switch (q) {
    case Quantity::Curvature: {
      const ArcContext ctx = classify(p.cut("z1"), p.cut("z2"), spec);
      const auto t = p.tangents(2);
      if (m == Method::FiniteDifference) {
        r.value = connection_curvature_fd(ctx, t[0], t[1]);
        r.oracle_tolerance = kFdOracleTol;
        if (with_oracle) r.residual_vs_oracle = residual(r.value, curvature_via_contour(ctx, t[0], t[1]));
      } else {
        r.value = curvature_via_contour(ctx, t[0], t[1], m);
        const Method other = m == Method::Residue ? Method::Quadrature : Method::Residue;
        if (with_oracle) r.residual_vs_oracle = residual(r.value, curvature_via_contour(ctx, t[0], t[1], other));
      }
      break;
    }
    case Quantity::Curving: {
      if (m == Method::FiniteDifference) unsupported(q, m);
      const CutPoint z = p.cut("z");
      const auto t = p.tangents(2);
      r.value = curving_eval(z, *spec, t[0], t[1], m);
      const Method other = m == Method::Residue ? Method::Quadrature : Method::Residue;
      if (with_oracle) r.residual_vs_oracle = residual(r.value, curving_eval(z, *spec, t[0], t[1], other));
      break;
    }
    case Quantity::Nu: {
      if (m == Method::Quadrature) unsupported(q, m);
      if (p.flag) {
        if (m != Method::Residue) unsupported(q, m);
        const auto& t = p.flag_tangents(3);
        const auto nu = pullback_nu_closed(p.flag->point, t[0], t[1], t[2]);
        r.value = nu.simplified / kTwoPiI;
        if (with_oracle) r.residual_vs_oracle = residual(r.value, nu.raw / kTwoPiI);
        break;
      }
      const auto t = p.tangents(3);
      const cplx closed = basic_three_form(p.group(), t[0], t[1], t[2]);
      if (m == Method::Residue) {
        r.value = closed;
        if (with_oracle) r.residual_vs_oracle = residual(closed, omega_three_form(p.group(), t[0], t[1], t[2]) / kTwoPiI);
      } else {
        const CutPoint z = p.doc.contains("z") ? p.cut("z") : CutPoint::from_angle(std::numbers::pi);
        r.value = exterior_derivative_fd(curving_form(), z, *spec, t[0], t[1], t[2]).value / kTwoPiI;
        r.oracle_tolerance = kFdOracleTol;
        if (with_oracle) r.residual_vs_oracle = residual(r.value, closed);
      }
      break;
    }
    case Quantity::Df: {
      if (m == Method::Quadrature) unsupported(q, m);
      const CutPoint z = p.cut("z");
      if (p.flag) {
        if (m != Method::Residue) unsupported(q, m);
        const auto& t = p.flag_tangents(3);
        r.value = pullback_df_closed(p.flag->point, z, t[0], t[1], t[2]);
        if (with_oracle) r.residual_vs_oracle = residual(r.value, pullback_nu_closed(p.flag->point, t[0], t[1], t[2]).simplified);
        break;
      }
      const auto t = p.tangents(3);
      const cplx omega = omega_three_form(p.group(), t[0], t[1], t[2]);
      r.oracle_tolerance = kFdOracleTol;
      if (m == Method::Residue) {
        r.value = omega;
        if (with_oracle) r.residual_vs_oracle = residual(omega, exterior_derivative_fd(curving_form(), z, *spec, t[0], t[1], t[2]).value);
      } else {
        r.value = exterior_derivative_fd(curving_form(), z, *spec, t[0], t[1], t[2]).value;
        if (with_oracle) r.residual_vs_oracle = residual(r.value, omega);
      }
      break;
    }
    case Quantity::Section: {
      if (m != Method::Residue) unsupported(q, m);
      r.value = section_value(p.cut("z1"), p.cut("z2"), p.cut("z3"), spec).value;
      if (with_oracle) r.residual_vs_oracle = std::abs(std::abs(r.value) - 1.0);
      break;
    }
    case Quantity::Projector: {
      if (m == Method::FiniteDifference) unsupported(q, m);
      const ArcContext ctx = classify(p.cut("z1"), p.cut("z2"), spec);
      const Mat pm = arc_projector(ctx, m);
      r.value = pm.trace();
      r.matrix = pm;
      const Method other = m == Method::Residue ? Method::Quadrature : Method::Residue;
      if (with_oracle) r.residual_vs_oracle = (pm - arc_projector(ctx, other)).norm();
      break;
    }
  }
  return r;
}

std::string eval_to_json(const EvalRecord& r) {
  json j = {{"value_re", r.value.real()},
            {"value_im", r.value.imag()},
            {"method", r.method},
            {"residual_vs_oracle", r.residual_vs_oracle ? json(*r.residual_vs_oracle) : json(nullptr)}};
  if (r.matrix) j["matrix"] = json_io::write_matrix(*r.matrix);
  return j.dump(2);
}

}  // namespace bgerbe::harness
