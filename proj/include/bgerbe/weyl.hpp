#pragma once

// Flag-times-torus parametrisation (P, lambda) -> sum_i lambda_i P_i of U(n),
// its tangent map, preimage enumeration over regular elements, and the closed
// forms of the pulled-back curving, its derivative and the basic three-form.

#include <vector>

#include "bgerbe/circle.hpp"
#include "bgerbe/linalg.hpp"

namespace bgerbe {

struct FlagTorusPoint {
  std::vector<Mat> projections;
  std::vector<cplx> lambda;

  int dim() const { return projections.empty() ? 0 : static_cast<int>(projections.front().rows()); }
};

// Increments dlambda_i (tangent to U(1) at lambda_i) and dP_i with
// sum_i dP_i = 0 and dP_i = P_i dP_i + dP_i P_i.
struct FlagTangent {
  std::vector<cplx> dlambda;
  std::vector<Mat> dP;
};

inline constexpr double kSampleGap = 1e-3;
inline constexpr double kRegularGap = 1e-6;

// Throws Domain unless the family is complete, orthogonal, Hermitian and the
// values are distinct unit complex numbers.
void validate_point(const FlagTorusPoint& pt);
void validate_tangent(const FlagTorusPoint& pt, const FlagTangent& t);

// Regular: every projection has rank one and values are kRegularGap apart.
bool is_regular(const FlagTorusPoint& pt, double min_gap = kRegularGap);

UnitaryMatrix weyl_apply(const FlagTorusPoint& pt);

// sum_i (dlambda_i P_i + lambda_i dP_i), the image tangent in the ambient space.
Mat weyl_tangent_ambient(const FlagTorusPoint& pt, const FlagTangent& t);
TangentVector weyl_tangent(const FlagTorusPoint& pt, const FlagTangent& t);

// sum_i lambda_i^{-1} dlambda_i P_i + sum_{i,j} lambda_i^{-1} lambda_j P_i dP_j.
Mat mc_pullback(const FlagTorusPoint& pt, const FlagTangent& t);

// All orderings of the eigen-decomposition of a regular g. Throws NotRegular.
std::vector<FlagTorusPoint> enumerate_preimages(const UnitaryMatrix& g);
int preimage_count(const UnitaryMatrix& g);

// Rank-one family from the columns of a Haar unitary with uniform values,
// resampled until pairwise gaps and the distance to 1 are at least min_gap.
FlagTorusPoint sample_regular(int n, Rng& rng, double min_gap = kSampleGap);

// dP_i = [K, P_i] for a random skew-Hermitian K, dlambda_i = i lambda_i theta_i.
FlagTangent random_flag_tangent(const FlagTorusPoint& pt, Rng& rng);

// (i/4 pi) sum_{i != k} (log_z l_i - log_z l_k + (l_k - l_i)/l_k) tr(P_i dP_k dP_k).
cplx pullback_curving_closed(const FlagTorusPoint& pt, const CutPoint& z, const FlagTangent& t1,
                             const FlagTangent& t2);

// Closed form of the pulled-back derivative of the curving; independent of z.
cplx pullback_df_closed(const FlagTorusPoint& pt, const CutPoint& z, const FlagTangent& t1, const FlagTangent& t2,
                        const FlagTangent& t3);

struct PulledBackThreeForm {
  cplx raw;         // two-term expansion of -(i/12 pi) tr(theta^3) in flag coordinates
  cplx simplified;  // after the torus cancellations
};

// 2 pi i times the pulled-back basic three-form, by both expressions.
PulledBackThreeForm pullback_nu_closed(const FlagTorusPoint& pt, const FlagTangent& t1, const FlagTangent& t2,
                                       const FlagTangent& t3);

}  // namespace bgerbe
