#pragma once

// Determinant-line fibres over cut pairs and their gerbe multiplication.
//
// An element of the line over (z1, z2, g) is stored as a coefficient against
// an orthonormal frame of the arc eigenspace:
//   z1 > z2 : c * (f_1 ^ ... ^ f_k)
//   z1 < z2 : c * (f_1 ^ ... ^ f_k)^*   (frame of the swapped pair)
//   null    : c
// Canonical frames are the arc_basis frames of one shared decomposition, so
// frames for nested arcs concatenate exactly.

#include <array>

#include "bgerbe/projectors.hpp"

namespace bgerbe {

enum class LineKind { Det, DualDet, Scalar };
const char* to_string(LineKind k);

class DetLineElement {
 public:
  DetLineElement(ArcContext ctx, LineKind kind, Mat frame, cplx coeff);

  const ArcContext& context() const noexcept { return ctx_; }
  LineKind kind() const noexcept { return kind_; }
  const Mat& frame() const noexcept { return frame_; }
  cplx coeff() const noexcept { return coeff_; }
  double norm() const { return std::abs(coeff_); }

  // Coefficient of the same vector against the canonical frame.
  cplx canonical_coeff() const;

 private:
  ArcContext ctx_;
  LineKind kind_;
  Mat frame_;
  cplx coeff_;
};

LineKind expected_kind(ArcClass c);

// Frame of the context's eigenspace (swapped for Negative, empty for Null).
Mat canonical_frame(const ArcContext& ctx);

DetLineElement fiber_element(const ArcContext& ctx, cplx coeff);

// Same vector expressed against another orthonormal frame of the same space.
DetLineElement with_frame(const DetLineElement& a, const Mat& frame);

struct Comparison {
  bool equal = false;
  double discrepancy = 0.0;
};

// Throws Incomparable for elements over different points.
Comparison same_element(const DetLineElement& a, const DetLineElement& b, double tol = 1e-9);

// Multiplication L(z1,z2) x L(z2,z3) -> L(z1,z3) for any ordering of the cuts.
// Throws Incomparable unless the middle cut and the spectrum match.
DetLineElement gerbe_product(const DetLineElement& a, const DetLineElement& b);

// Hermitian dual: the element of L(z2,z1) pairing with a to |a|^2.
DetLineElement dual_transport(const DetLineElement& a);

// Contraction of a in L(z1,z2) with b in L(z2,z1).
cplx pair(const DetLineElement& a, const DetLineElement& b);

// Unit element in a Haar-random frame with a random phase.
DetLineElement random_unit_element(const ArcContext& ctx, Rng& rng);

enum class TypeClass { OneOne, OneZero, ZeroOne, ZeroZero };
const char* to_string(TypeClass t);

struct TripleSectionValue {
  std::array<CutPoint, 3> cuts;
  cplx value;
  TypeClass type;
};

// Scalar of s(z1, z2, z3, g) against canonical frames, i.e. the product of the
// canonical units of L(z1,z2) and L(z2,z3) read against the canonical unit of L(z1,z3).
TripleSectionValue section_value(const CutPoint& z1, const CutPoint& z2, const CutPoint& z3,
                                 const SpectrumPtr& spec);

// Type of the sorted triple: whether each consecutive arc holds eigenvalues.
TypeClass triple_type(const CutPoint& z1, const CutPoint& z2, const CutPoint& z3,
                      const SpectrumPtr& spec);

// Max |(ab)c - a(bc)| over the supplied number of random unit triples.
double associativity_check(const CutPoint& z1, const CutPoint& z2, const CutPoint& z3,
                           const CutPoint& z4, const SpectrumPtr& spec, Rng& rng, int trials = 1);

// Element over (z1, z2, k g k^dagger) with frame vectors mapped by v -> k v,
// read against the canonical frame of `target` (the decomposition of k g k^dagger).
DetLineElement conjugate_fiber(const UnitaryMatrix& k, const DetLineElement& a, const SpectrumPtr& target);
DetLineElement conjugate_fiber(const UnitaryMatrix& k, const DetLineElement& a);

// Fibre map over the Weyl morphism: a lives over a diagonal torus element t and
// is carried to g t g^dagger by v -> g v. Throws Domain when t is not diagonal.
DetLineElement weyl_line_map(const UnitaryMatrix& coset_rep, const DetLineElement& a,
                             const SpectrumPtr& target);
DetLineElement weyl_line_map(const UnitaryMatrix& coset_rep, const DetLineElement& a);

}  // namespace bgerbe
