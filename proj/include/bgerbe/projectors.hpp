#pragma once

// Arc eigenprojectors P(z1, z2, g), the positive/null/negative classification
// of cut pairs, canonical arc eigenspace frames and first derivatives of P.

#include <memory>
#include <vector>

#include "bgerbe/circle.hpp"
#include "bgerbe/linalg.hpp"

namespace bgerbe {

enum class Method { Residue, Quadrature, FiniteDifference };
const char* to_string(Method m);

enum class ArcClass { Positive, Null, Negative };
const char* to_string(ArcClass c);

using SpectrumPtr = std::shared_ptr<const SpectralDecomposition>;

SpectrumPtr share(SpectralDecomposition spec);

// A cut pair against one shared spectral decomposition. Every context built on
// the same SpectrumPtr draws its frames from the same eigenbases.
class ArcContext {
 public:
  ArcContext(CutPoint z1, CutPoint z2, SpectrumPtr spec, ArcClass cls, std::vector<std::size_t> arc);

  const CutPoint& z1() const noexcept { return z1_; }
  const CutPoint& z2() const noexcept { return z2_; }
  const SpectralDecomposition& spectrum() const noexcept { return *spec_; }
  const SpectrumPtr& spectrum_ptr() const noexcept { return spec_; }
  const UnitaryMatrix& group_element() const noexcept { return spec_->matrix(); }
  ArcClass classification() const noexcept { return cls_; }
  // Eigenvalue indices strictly between the cuts, in canonical frame order:
  // decreasing angle, so the first index is nearest the larger cut.
  const std::vector<std::size_t>& arc_indices() const noexcept { return arc_; }
  bool in_arc(std::size_t i) const;
  int arc_dim() const;

  ArcContext swapped() const;

 private:
  CutPoint z1_;
  CutPoint z2_;
  SpectrumPtr spec_;
  ArcClass cls_;
  std::vector<std::size_t> arc_;
};

// Equal cuts classify as Null. Throws IllConditionedCut when a cut is within
// kCutExclusion of an eigenvalue.
ArcContext classify(const CutPoint& z1, const CutPoint& z2, const SpectrumPtr& spec);

// Residue mode sums eigenprojectors; quadrature mode integrates the resolvent
// over arc_contour. Null gives zero; Negative throws Domain (swap first).
Mat arc_projector(const ArcContext& ctx, Method method = Method::Residue);

struct ArcEigenspace {
  Mat basis;                      // n x k, orthonormal columns
  std::vector<cplx> eigenvalues;  // eigenvalue carried by each column
  int dim() const noexcept { return static_cast<int>(basis.cols()); }
};

// Canonical frame: eigenspace bases concatenated in arc_indices order.
// Throws EmptySpace unless the context is Positive.
ArcEigenspace arc_basis(const ArcContext& ctx);

inline constexpr double kFdStep = 1e-5;

// Residue mode: sum_{i in arc, j not in arc} (l_i - l_j)^{-1} (P_i X P_j + P_j X P_i).
// FD mode: central difference of the residue-mode projector along g exp(tA).
// Throws StepTooLarge if the FD excursion could carry an eigenvalue across a cut.
Mat projector_derivative(const ArcContext& ctx, const TangentVector& x,
                         Method method = Method::Residue, double step = kFdStep);

inline constexpr double kIsolationGap = 1e-3;

// Derivative of the single eigenprojector P_k. Throws Gap when lambda_k is
// within kIsolationGap of another eigenvalue.
Mat single_projector_derivative(const SpectralDecomposition& spec, std::size_t k,
                                const TangentVector& x);

// Central difference of the Riesz projector onto the eigenvalue nearest
// lambda_k along g exp(tA).
Mat single_projector_derivative_fd(const SpectralDecomposition& spec, std::size_t k,
                                   const TangentVector& x, double step = kFdStep);

}  // namespace bgerbe
