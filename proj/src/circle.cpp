#include "bgerbe/circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bgerbe/error.hpp"

namespace bgerbe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPointTol = 1e-12;

double ratio_angle(cplx to, cplx from) { return std::arg(to / from); }

}  // namespace

CutPoint::CutPoint(cplx value) : value_(value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) ||
      std::abs(std::abs(value) - 1.0) > kPointTol) {
    fail(ErrorKind::Domain, "cut point must have unit modulus");
  }
  if (std::abs(value - 1.0) <= kPointTol) fail(ErrorKind::Domain, "cut point must differ from 1");
  angle_ = angle_of(value);
}

CutPoint CutPoint::from_angle(double theta) { return CutPoint(std::polar(1.0, theta)); }

bool circle_gt(const CutPoint& z1, const CutPoint& z2) {
  if (std::abs(z1.value() - z2.value()) <= kPointTol) {
    fail(ErrorKind::Incomparable, "cut points coincide");
  }
  return z1.angle() > z2.angle();
}

bool circle_between(const CutPoint& z1, const CutPoint& z2, cplx lambda) {
  if (std::abs(z1.value() - z2.value()) <= kPointTol) {
    fail(ErrorKind::Incomparable, "cut points coincide");
  }
  if (std::abs(lambda - z1.value()) <= kPointTol || std::abs(lambda - z2.value()) <= kPointTol) {
    fail(ErrorKind::Boundary, "point lies on an arc endpoint");
  }
  const double lo = std::min(z1.angle(), z2.angle());
  const double hi = std::max(z1.angle(), z2.angle());
  const double a = angle_of(lambda);
  return a > lo && a < hi;
}

cplx log_cut(const CutPoint& z, cplx xi) {
  // Rotate so the cut ray becomes the positive real axis.
  const cplx w = xi * std::conj(z.value());
  const double dist = w.real() >= 0.0 ? std::abs(w.imag()) : std::abs(w);
  if (dist < kPointTol) fail(ErrorKind::BranchCut, "argument on the branch cut");
  const double phi = angle_of(xi);
  const double im = phi < z.angle() ? phi : phi - kTwoPi;
  return {std::log(std::abs(xi)), im};
}

cplx Segment::point(double s) const {
  if (const auto* a = std::get_if<ArcSegment>(&shape_)) {
    return std::polar(a->radius, a->theta_begin + s * (a->theta_end - a->theta_begin));
  }
  const auto& l = std::get<LineSegment>(shape_);
  return l.begin + s * (l.end - l.begin);
}

cplx Segment::derivative(double s) const {
  if (const auto* a = std::get_if<ArcSegment>(&shape_)) {
    const double span = a->theta_end - a->theta_begin;
    return cplx(0.0, span) * std::polar(a->radius, a->theta_begin + s * span);
  }
  const auto& l = std::get<LineSegment>(shape_);
  return l.end - l.begin;
}

double Contour::closure_gap() const {
  if (segments.empty()) return 0.0;
  return std::abs(segments.back().point(1.0) - segments.front().point(0.0));
}

Contour annular_sector(double theta_begin, double theta_end, double r_in, double r_out) {
  if (!(theta_end > theta_begin) || theta_end - theta_begin >= kTwoPi || !(r_in < 1.0 && 1.0 < r_out)) {
    fail(ErrorKind::Domain, "degenerate annular sector");
  }
  const cplx eb = std::polar(1.0, theta_begin);
  const cplx ee = std::polar(1.0, theta_end);
  Contour c;
  c.segments.emplace_back(ArcSegment{r_out, theta_begin, theta_end});
  c.segments.emplace_back(LineSegment{r_out * ee, ee});
  c.segments.emplace_back(LineSegment{ee, r_in * ee});
  c.segments.emplace_back(ArcSegment{r_in, theta_end, theta_begin});
  c.segments.emplace_back(LineSegment{r_in * eb, eb});
  c.segments.emplace_back(LineSegment{eb, r_out * eb});
  return c;
}

int winding_number(const Contour& c, cplx w) {
  double total = 0.0;
  for (const auto& seg : c.segments) {
    const int pieces = seg.is_arc() ? 4096 : 64;
    cplx prev = seg.point(0.0) - w;
    for (int k = 1; k <= pieces; ++k) {
      const cplx cur = seg.point(static_cast<double>(k) / pieces) - w;
      total += ratio_angle(cur, prev);
      prev = cur;
    }
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

void require_clear_cut(const CutPoint& z, const SpectralDecomposition& spec) {
  for (const auto& s : spec.spaces()) {
    if (chordal_distance(s.eigenvalue, z.value()) < kCutExclusion) {
      fail(ErrorKind::IllConditionedCut, "cut point within exclusion distance of an eigenvalue");
    }
  }
}

Contour arc_contour(const CutPoint& z1, const CutPoint& z2, const SpectralDecomposition& spec) {
  require_clear_cut(z1, spec);
  require_clear_cut(z2, spec);
  const double lo = std::min(z1.angle(), z2.angle());
  const double hi = std::max(z1.angle(), z2.angle());
  double first = std::numeric_limits<double>::infinity();
  double last = -std::numeric_limits<double>::infinity();
  for (const auto& s : spec.spaces()) {
    const double a = angle_of(s.eigenvalue);
    if (a > lo && a < hi) {
      first = std::min(first, a);
      last = std::max(last, a);
    }
  }
  if (!std::isfinite(first)) fail(ErrorKind::EmptyInterior, "no eigenvalue between the cuts");
  return annular_sector(0.5 * (lo + first), 0.5 * (hi + last));
}

Contour spectrum_contour(const CutPoint& z, const SpectralDecomposition& spec) {
  require_clear_cut(z, spec);
  // Counter-clockwise angular offsets of each eigenvalue from z, in (0, 2pi).
  double nearest_ccw = kTwoPi;
  double nearest_cw = kTwoPi;
  for (const auto& s : spec.spaces()) {
    double d = angle_of(s.eigenvalue) - z.angle();
    if (d <= 0.0) d += kTwoPi;
    nearest_ccw = std::min(nearest_ccw, d);
    nearest_cw = std::min(nearest_cw, kTwoPi - d);
  }
  return annular_sector(z.angle() + 0.5 * nearest_ccw, z.angle() + kTwoPi - 0.5 * nearest_cw);
}

}  // namespace bgerbe
