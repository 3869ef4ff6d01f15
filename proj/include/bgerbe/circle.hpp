#pragma once

// The cut circle U(1) minus {1}: ordering, betweenness, branch logarithms and
// the annular-sector contours used for every resolvent integral.

#include <variant>
#include <vector>

#include "bgerbe/linalg.hpp"

namespace bgerbe {

// Minimum chordal distance between a cut point and any eigenvalue.
inline constexpr double kCutExclusion = 1e-6;
inline constexpr double kInnerRadius = 0.5;
inline constexpr double kOuterRadius = 1.5;

// A unit complex number other than 1, with its angle in (0, 2pi).
class CutPoint {
 public:
  // Throws Domain if |value| deviates from 1 by more than 1e-12 or value is 1.
  explicit CutPoint(cplx value);
  static CutPoint from_angle(double theta);

  cplx value() const noexcept { return value_; }
  double angle() const noexcept { return angle_; }

  friend bool operator==(const CutPoint& a, const CutPoint& b) { return a.value_ == b.value_; }

 private:
  cplx value_;
  double angle_;
};

// True iff rotating z2 counter-clockwise reaches z1 before passing 1.
// Throws Incomparable when the points coincide.
bool circle_gt(const CutPoint& z1, const CutPoint& z2);

// True iff lambda is in the component of U(1) - {z1, z2} not containing 1.
// Throws Boundary when lambda sits on an endpoint.
bool circle_between(const CutPoint& z1, const CutPoint& z2, cplx lambda);

// Branch of log on C minus the closed ray through z with log_z(1) = 0.
// Throws BranchCut within 1e-12 of the ray.
cplx log_cut(const CutPoint& z, cplx xi);

struct ArcSegment {
  double radius;
  double theta_begin;
  double theta_end;
};

struct LineSegment {
  cplx begin;
  cplx end;
};

// A smooth piece parametrised over s in [0, 1].
class Segment {
 public:
  Segment(ArcSegment arc) : shape_(arc) {}
  Segment(LineSegment line) : shape_(line) {}

  cplx point(double s) const;
  cplx derivative(double s) const;
  bool is_arc() const noexcept { return std::holds_alternative<ArcSegment>(shape_); }
  const ArcSegment& arc() const { return std::get<ArcSegment>(shape_); }
  const LineSegment& line() const { return std::get<LineSegment>(shape_); }

 private:
  std::variant<ArcSegment, LineSegment> shape_;
};

struct Contour {
  std::vector<Segment> segments;

  // Distance between the end of the last segment and the start of the first.
  double closure_gap() const;
};

// Counter-clockwise boundary of {r e^{i theta} : r_in <= r <= r_out, theta_begin <= theta <= theta_end}.
// Radial edges are split at r = 1 so each piece stays clear of poles on the circle.
Contour annular_sector(double theta_begin, double theta_end, double r_in = kInnerRadius,
                       double r_out = kOuterRadius);

// Winding number of the contour around w, from the accumulated argument change.
int winding_number(const Contour& c, cplx w);

// Sector crossing the circle once in each gap between the arc eigenvalues and
// the two cuts. Throws EmptyInterior when no eigenvalue lies between the cuts
// and IllConditionedCut when a cut is within kCutExclusion of an eigenvalue.
Contour arc_contour(const CutPoint& z1, const CutPoint& z2, const SpectralDecomposition& spec);

// Sector enclosing the whole spectrum and avoiding the ray through z.
Contour spectrum_contour(const CutPoint& z, const SpectralDecomposition& spec);

// Throws IllConditionedCut when z is within kCutExclusion of an eigenvalue.
void require_clear_cut(const CutPoint& z, const SpectralDecomposition& spec);

}  // namespace bgerbe
