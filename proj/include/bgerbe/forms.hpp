#pragma once

// Pointwise evaluation of differential forms on U(n), on the cut-point space
// and on fibre products: the Maurer-Cartan form, the curvature two-form by
// three routes, the curving, the basic three-form and finite-difference
// exterior derivatives.
//
// Every k-form is evaluated on k tangent vectors as the full signed sum over
// permutations of its slots, without a 1/k! factor.

#include <array>
#include <functional>
#include <span>

#include "bgerbe/projectors.hpp"

namespace bgerbe {

// g^{-1} X for X based at g.
Mat mc_form(const UnitaryMatrix& g, const TangentVector& x);

// sum_sigma sgn(sigma) tr(M_0 T_{sigma 1} M_1 ... T_{sigma k} M_k).
// Throws SlotMismatch unless coeffs.size() == slots.size() + 1.
cplx wedge_trace_eval(std::span<const Mat> coeffs, std::span<const Mat> slots);

// Permutation sum of an arbitrary k-slot term, for wedges of scalar and trace factors.
cplx antisymmetrize(int k, const std::function<cplx(std::span<const int>)>& term);

// tr(P dP dP)(X, Y) with dP from projector_derivative. Negative contexts are the
// negated swapped value, Null contexts give zero.
cplx curvature_via_projectors(const ArcContext& ctx, const TangentVector& x, const TangentVector& y);

// (1/4 pi i) contour integral of tr(R dg R^2 dg), R the resolvent. Quadrature runs
// over arc_contour; residue mode is the closed pair sum.
cplx curvature_via_contour(const ArcContext& ctx, const TangentVector& x, const TangentVector& y,
                           Method method = Method::Residue);

// (1/2 pi i) contour integral of tr(R dg R^2 P dg) with P the arc projector.
cplx projector_inserted_curvature(const ArcContext& ctx, const TangentVector& x, const TangentVector& y,
                    Method method = Method::Residue);

// Curving: (1/8 pi^2) contour integral of log_z(xi) tr(R dg R^2 dg) over a
// contour around the whole spectrum avoiding the ray through z.
cplx curving_eval(const CutPoint& z, const SpectralDecomposition& spec, const TangentVector& x,
                  const TangentVector& y, Method method = Method::Residue);

// Curving quadrature over a caller-supplied contour (for deformation checks).
cplx curving_on_contour(const CutPoint& z, const SpectralDecomposition& spec, const TangentVector& x,
                        const TangentVector& y, const Contour& c);

// A two-form on the cut-point space, evaluated at (z, g) on tangents at g.
using TwoFormOnY = std::function<cplx(const CutPoint&, const SpectralDecomposition&, const TangentVector&,
                                      const TangentVector&)>;

TwoFormOnY curving_form(Method method = Method::Residue);

// delta(f)(z1, z2) = f(z2) - f(z1).
cplx delta_pairs(const TwoFormOnY& f, const CutPoint& z1, const CutPoint& z2, const SpectralDecomposition& spec,
                 const TangentVector& x, const TangentVector& y);

// -(1/24 pi^2) tr((g^{-1} dg)^3).
cplx basic_three_form(const UnitaryMatrix& g, const TangentVector& x, const TangentVector& y,
                      const TangentVector& z);
// 2 pi i times the basic three-form: -(i/12 pi) tr((g^{-1} dg)^3).
cplx omega_three_form(const UnitaryMatrix& g, const TangentVector& x, const TangentVector& y,
                      const TangentVector& z);

struct ExteriorDerivative {
  cplx value;         // df(X, Y, Z) along the group directions
  cplx z_derivative;  // d/d theta of f(X, Y) at z e^{i theta}
};

// Cartan formula with left-invariant extensions h -> h A and central
// differences along h exp(tA). Throws StepTooLarge when a stencil point would
// move an eigenvalue across z.
ExteriorDerivative exterior_derivative_fd(const TwoFormOnY& f, const CutPoint& z, const SpectralDecomposition& spec,
                                          const TangentVector& x, const TangentVector& y, const TangentVector& w,
                                          double step = kFdStep);

// Arc eigenspace frame at the context's point, obtained by projecting a fixed
// reference frame and orthonormalising.
Mat gauge_frame(const ArcContext& ctx, const Mat& reference);

struct FrameAlongCurve {
  Mat direction;
  double step;
  std::array<Mat, 3> frames;  // at t = -step, 0, +step
};

// Frames along t -> g exp(tA) in the gauge of `reference`. Throws Realignment
// when consecutive frames differ by more than 0.1 in change of basis.
FrameAlongCurve frame_along_curve(const ArcContext& ctx, const Mat& direction, const Mat& reference,
                                  double step = kFdStep);

// sum_i <b_i, d b_i / dt> at t = 0.
cplx connection_one_form(const FrameAlongCurve& curve);

// Exterior derivative of the connection one-form in the gauge of the
// context's canonical frame, by nested central differences.
cplx connection_curvature_fd(const ArcContext& ctx, const TangentVector& x, const TangentVector& y,
                             double outer_step = 1e-3, double inner_step = kFdStep);

}  // namespace bgerbe
