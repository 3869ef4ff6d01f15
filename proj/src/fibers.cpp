#include "bgerbe/fibers.hpp"

#include <algorithm>
#include <numbers>

#include "bgerbe/error.hpp"

namespace bgerbe {

namespace {

cplx det_of(const Mat& q) { return q.size() == 0 ? cplx(1.0) : q.determinant(); }

Mat hcat(const Mat& a, const Mat& b, int n) {
  Mat out(n, a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

// b's frame expressed through an orthonormal frame g of the same space.
cplx change_of_basis(const Mat& g, const Mat& f) {
  if (g.cols() != f.cols()) fail(ErrorKind::Dimension, "frames of different rank");
  return det_of(g.adjoint() * f);
}

bool same_point(const ArcContext& a, const ArcContext& b) {
  const bool same_g = a.spectrum_ptr() == b.spectrum_ptr() ||
                      (a.group_element().matrix() - b.group_element().matrix()).norm() == 0.0;
  return same_g && a.z1() == b.z1() && a.z2() == b.z2();
}

DetLineElement canonical_element(const ArcContext& ctx, cplx coeff) {
  return DetLineElement(ctx, expected_kind(ctx.classification()), canonical_frame(ctx), coeff);
}

void require_transport_target(const DetLineElement& a, const SpectrumPtr& target) {
  if (target->dim() != a.context().spectrum().dim()) {
    fail(ErrorKind::Dimension, "conjugation target has a different dimension");
  }
}

DetLineElement push_frame(const UnitaryMatrix& k, const DetLineElement& a, const SpectrumPtr& target) {
  require_transport_target(a, target);
  if (k.dim() != target->dim()) fail(ErrorKind::Dimension, "conjugating matrix has the wrong dimension");
  const ArcContext ctx = classify(a.context().z1(), a.context().z2(), target);
  if (ctx.classification() != a.context().classification() || ctx.arc_dim() != a.context().arc_dim()) {
    fail(ErrorKind::Domain, "target spectrum does not match the conjugated arc");
  }
  const Mat moved = k.matrix() * a.frame();
  return with_frame(DetLineElement(ctx, a.kind(), moved, a.coeff()), canonical_frame(ctx));
}

}  // namespace

const char* to_string(LineKind k) {
  switch (k) {
    case LineKind::Det: return "det";
    case LineKind::DualDet: return "dual-det";
    case LineKind::Scalar: return "scalar";
  }
  return "unknown";
}

const char* to_string(TypeClass t) {
  switch (t) {
    case TypeClass::OneOne: return "(1,1)";
    case TypeClass::OneZero: return "(1,0)";
    case TypeClass::ZeroOne: return "(0,1)";
    case TypeClass::ZeroZero: return "(0,0)";
  }
  return "unknown";
}

LineKind expected_kind(ArcClass c) {
  switch (c) {
    case ArcClass::Positive: return LineKind::Det;
    case ArcClass::Negative: return LineKind::DualDet;
    case ArcClass::Null: return LineKind::Scalar;
  }
  return LineKind::Scalar;
}

DetLineElement::DetLineElement(ArcContext ctx, LineKind kind, Mat frame, cplx coeff)
    : ctx_(std::move(ctx)), kind_(kind), frame_(std::move(frame)), coeff_(coeff) {
  if (kind_ != expected_kind(ctx_.classification())) {
    fail(ErrorKind::Domain, "line kind does not match the context classification");
  }
  const int n = ctx_.spectrum().dim();
  if (kind_ == LineKind::Scalar) {
    frame_.resize(n, 0);
    return;
  }
  if (frame_.rows() != n || frame_.cols() != ctx_.arc_dim()) {
    fail(ErrorKind::Dimension, "frame does not match the arc eigenspace");
  }
  const Mat gram = frame_.adjoint() * frame_;
  if ((gram - Mat::Identity(gram.rows(), gram.cols())).norm() > 1e-10) {
    fail(ErrorKind::Domain, "frame is not orthonormal");
  }
}

cplx DetLineElement::canonical_coeff() const {
  if (kind_ == LineKind::Scalar) return coeff_;
  const cplx d = change_of_basis(canonical_frame(ctx_), frame_);
  return kind_ == LineKind::Det ? coeff_ * d : coeff_ / d;
}

Mat canonical_frame(const ArcContext& ctx) {
  switch (ctx.classification()) {
    case ArcClass::Positive: return arc_basis(ctx).basis;
    case ArcClass::Negative: return arc_basis(ctx.swapped()).basis;
    case ArcClass::Null: break;
  }
  return Mat(ctx.spectrum().dim(), 0);
}

DetLineElement fiber_element(const ArcContext& ctx, cplx coeff) { return canonical_element(ctx, coeff); }

DetLineElement with_frame(const DetLineElement& a, const Mat& frame) {
  if (a.kind() == LineKind::Scalar) return a;
  const cplx d = change_of_basis(frame, a.frame());
  const cplx c = a.kind() == LineKind::Det ? a.coeff() * d : a.coeff() / d;
  return DetLineElement(a.context(), a.kind(), frame, c);
}

Comparison same_element(const DetLineElement& a, const DetLineElement& b, double tol) {
  if (!same_point(a.context(), b.context())) fail(ErrorKind::Incomparable, "elements over different points");
  const double d = std::abs(a.canonical_coeff() - b.canonical_coeff());
  return {d <= tol, d};
}

DetLineElement gerbe_product(const DetLineElement& a, const DetLineElement& b) {
  const ArcContext& ca = a.context();
  const ArcContext& cb = b.context();
  const bool same_g = ca.spectrum_ptr() == cb.spectrum_ptr() ||
                      (ca.group_element().matrix() - cb.group_element().matrix()).norm() == 0.0;
  if (!same_g || !(ca.z2() == cb.z1())) fail(ErrorKind::Incomparable, "middle cut or base point mismatch");

  const int n = ca.spectrum().dim();
  const ArcContext r = classify(ca.z1(), cb.z2(), ca.spectrum_ptr());
  const double x = ca.z1().angle();
  const double y = ca.z2().angle();
  const double z = cb.z2().angle();
  const cplx k = a.coeff() * b.coeff();
  const Mat& fa = a.frame();
  const Mat& fb = b.frame();

  if (x == y) return with_frame(DetLineElement(r, b.kind(), fb, k), canonical_frame(r));
  if (y == z) return with_frame(DetLineElement(r, a.kind(), fa, k), canonical_frame(r));
  if (x == z) {
    // Contraction of a line with its dual.
    const cplx p = x > y ? change_of_basis(fb, fa) : change_of_basis(fa, fb);
    return DetLineElement(r, LineKind::Scalar, Mat(n, 0), k * p);
  }

  const Mat fc = canonical_frame(r);
  cplx coeff;
  if (x > y && y > z) {
    coeff = k * change_of_basis(fc, hcat(fa, fb, n));
  } else if (z > y && y > x) {
    coeff = k / change_of_basis(fc, hcat(fb, fa, n));
  } else if (y > x && x > z) {
    coeff = k * change_of_basis(hcat(fa, fc, n), fb);
  } else if (x > z && z > y) {
    coeff = k * change_of_basis(hcat(fc, fb, n), fa);
  } else if (z > x && x > y) {
    coeff = k / change_of_basis(hcat(fc, fa, n), fb);
  } else {
    coeff = k / change_of_basis(hcat(fb, fc, n), fa);
  }
  return DetLineElement(r, expected_kind(r.classification()), fc, coeff);
}

DetLineElement dual_transport(const DetLineElement& a) {
  const ArcContext s = a.context().swapped();
  return DetLineElement(s, expected_kind(s.classification()), a.frame(), std::conj(a.coeff()));
}

cplx pair(const DetLineElement& a, const DetLineElement& b) {
  if (!(a.context().z1() == b.context().z2())) fail(ErrorKind::Incomparable, "elements are not over swapped pairs");
  return gerbe_product(a, b).coeff();
}

DetLineElement random_unit_element(const ArcContext& ctx, Rng& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const cplx c = std::polar(1.0, phase(rng));
  if (ctx.classification() == ArcClass::Null) return canonical_element(ctx, c);
  const Mat f = canonical_frame(ctx);
  const Mat q = random_unitary(static_cast<int>(f.cols()), rng).matrix();
  return DetLineElement(ctx, expected_kind(ctx.classification()), f * q, c);
}

TypeClass triple_type(const CutPoint& z1, const CutPoint& z2, const CutPoint& z3, const SpectrumPtr& spec) {
  std::array<CutPoint, 3> s{z1, z2, z3};
  std::sort(s.begin(), s.end(), [](const CutPoint& a, const CutPoint& b) { return a.angle() > b.angle(); });
  const bool first = classify(s[0], s[1], spec).arc_dim() > 0;
  const bool second = classify(s[1], s[2], spec).arc_dim() > 0;
  if (first && second) return TypeClass::OneOne;
  if (first) return TypeClass::OneZero;
  if (second) return TypeClass::ZeroOne;
  return TypeClass::ZeroZero;
}

TripleSectionValue section_value(const CutPoint& z1, const CutPoint& z2, const CutPoint& z3,
                                 const SpectrumPtr& spec) {
  const auto a = fiber_element(classify(z1, z2, spec), 1.0);
  const auto b = fiber_element(classify(z2, z3, spec), 1.0);
  const auto p = gerbe_product(a, b);
  return {{z1, z2, z3}, p.canonical_coeff(), triple_type(z1, z2, z3, spec)};
}

double associativity_check(const CutPoint& z1, const CutPoint& z2, const CutPoint& z3, const CutPoint& z4,
                           const SpectrumPtr& spec, Rng& rng, int trials) {
  const ArcContext c12 = classify(z1, z2, spec);
  const ArcContext c23 = classify(z2, z3, spec);
  const ArcContext c34 = classify(z3, z4, spec);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto a = random_unit_element(c12, rng);
    const auto b = random_unit_element(c23, rng);
    const auto c = random_unit_element(c34, rng);
    const auto left = gerbe_product(gerbe_product(a, b), c);
    const auto right = gerbe_product(a, gerbe_product(b, c));
    worst = std::max(worst, std::abs(left.canonical_coeff() - right.canonical_coeff()));
  }
  return worst;
}

DetLineElement conjugate_fiber(const UnitaryMatrix& k, const DetLineElement& a, const SpectrumPtr& target) {
  return push_frame(k, a, target);
}

DetLineElement conjugate_fiber(const UnitaryMatrix& k, const DetLineElement& a) {
  const Mat& g = a.context().group_element().matrix();
  const auto target = share(spectral_decompose(UnitaryMatrix(k.matrix() * g * k.adjoint()),
                                               a.context().spectrum().cluster_tol()));
  return push_frame(k, a, target);
}

DetLineElement weyl_line_map(const UnitaryMatrix& coset_rep, const DetLineElement& a, const SpectrumPtr& target) {
  const Mat& t = a.context().group_element().matrix();
  const Mat off = t - Mat(t.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > 1e-12) fail(ErrorKind::Domain, "torus element must be diagonal");
  return push_frame(coset_rep, a, target);
}

DetLineElement weyl_line_map(const UnitaryMatrix& coset_rep, const DetLineElement& a) {
  const Mat& t = a.context().group_element().matrix();
  const auto target = share(spectral_decompose(UnitaryMatrix(coset_rep.matrix() * t * coset_rep.adjoint()),
                                               a.context().spectrum().cluster_tol()));
  return weyl_line_map(coset_rep, a, target);
}

}  // namespace bgerbe
