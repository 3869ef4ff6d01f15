#include "bgerbe/projectors.hpp"

#include <algorithm>

#include "bgerbe/error.hpp"
#include "bgerbe/quadrature.hpp"

namespace bgerbe {

const char* to_string(Method m) {
  switch (m) {
    case Method::Residue: return "residue";
    case Method::Quadrature: return "quadrature";
    case Method::FiniteDifference: return "fd";
  }
  return "unknown";
}

const char* to_string(ArcClass c) {
  switch (c) {
    case ArcClass::Positive: return "positive";
    case ArcClass::Null: return "null";
    case ArcClass::Negative: return "negative";
  }
  return "unknown";
}

SpectrumPtr share(SpectralDecomposition spec) {
  return std::make_shared<const SpectralDecomposition>(std::move(spec));
}

ArcContext::ArcContext(CutPoint z1, CutPoint z2, SpectrumPtr spec, ArcClass cls,
                       std::vector<std::size_t> arc)
    : z1_(z1), z2_(z2), spec_(std::move(spec)), cls_(cls), arc_(std::move(arc)) {}

bool ArcContext::in_arc(std::size_t i) const {
  return std::find(arc_.begin(), arc_.end(), i) != arc_.end();
}

int ArcContext::arc_dim() const {
  int d = 0;
  for (auto i : arc_) d += spec_->multiplicity(i);
  return d;
}

ArcContext ArcContext::swapped() const {
  ArcClass cls = cls_;
  if (cls == ArcClass::Positive) cls = ArcClass::Negative;
  else if (cls == ArcClass::Negative) cls = ArcClass::Positive;
  return ArcContext(z2_, z1_, spec_, cls, arc_);
}

ArcContext classify(const CutPoint& z1, const CutPoint& z2, const SpectrumPtr& spec) {
  require_clear_cut(z1, *spec);
  require_clear_cut(z2, *spec);
  if (z1 == z2) return ArcContext(z1, z2, spec, ArcClass::Null, {});
  std::vector<std::size_t> arc;
  for (std::size_t i = 0; i < spec->size(); ++i) {
    if (circle_between(z1, z2, spec->eigenvalue(i))) arc.push_back(i);
  }
  std::sort(arc.begin(), arc.end(), [&](std::size_t a, std::size_t b) {
    return angle_of(spec->eigenvalue(a)) > angle_of(spec->eigenvalue(b));
  });
  ArcClass cls = ArcClass::Null;
  if (!arc.empty()) cls = circle_gt(z1, z2) ? ArcClass::Positive : ArcClass::Negative;
  return ArcContext(z1, z2, spec, cls, std::move(arc));
}

Mat arc_projector(const ArcContext& ctx, Method method) {
  const int n = ctx.spectrum().dim();
  if (ctx.classification() == ArcClass::Null) return Mat::Zero(n, n);
  if (ctx.classification() == ArcClass::Negative) {
    fail(ErrorKind::Domain, "negative context: evaluate the swapped pair");
  }
  if (method == Method::Quadrature) {
    const Contour c = arc_contour(ctx.z1(), ctx.z2(), ctx.spectrum());
    const Mat& g = ctx.group_element().matrix();
    const Mat eye = Mat::Identity(n, n);
    auto batch = [&](std::span<const cplx> xs, std::span<const cplx> ws) {
      Mat sum = Mat::Zero(n, n);
      for (std::size_t q = 0; q < xs.size(); ++q) {
        sum += ws[q] * Eigen::PartialPivLU<Mat>(xs[q] * eye - g).inverse();
      }
      return sum;
    };
    return contour_integral<Mat>(c, batch, Mat::Zero(n, n));
  }
  if (method != Method::Residue) fail(ErrorKind::Domain, "projector supports residue or quadrature");
  Mat p = Mat::Zero(n, n);
  for (auto i : ctx.arc_indices()) p += ctx.spectrum().projector(i);
  return p;
}

ArcEigenspace arc_basis(const ArcContext& ctx) {
  if (ctx.classification() != ArcClass::Positive) {
    fail(ErrorKind::EmptySpace, "arc eigenspace requires a positive context");
  }
  const auto& spec = ctx.spectrum();
  ArcEigenspace out;
  out.basis.resize(spec.dim(), ctx.arc_dim());
  Eigen::Index col = 0;
  for (auto i : ctx.arc_indices()) {
    const Mat& b = spec[i].basis;
    out.basis.middleCols(col, b.cols()) = b;
    col += b.cols();
    for (Eigen::Index k = 0; k < b.cols(); ++k) out.eigenvalues.push_back(spec.eigenvalue(i));
  }
  return out;
}

namespace {

Mat derivative_residue(const SpectralDecomposition& spec, const std::vector<bool>& inside, const Mat& x) {
  const int n = spec.dim();
  Mat d = Mat::Zero(n, n);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (!inside[i]) continue;
    for (std::size_t j = 0; j < spec.size(); ++j) {
      if (inside[j]) continue;
      const cplx c = 1.0 / (spec.eigenvalue(i) - spec.eigenvalue(j));
      const Mat& pi = spec.projector(i);
      const Mat& pj = spec.projector(j);
      d += c * (pi * x * pj + pj * x * pi);
    }
  }
  return d;
}

void check_step(const SpectralDecomposition& spec, std::initializer_list<CutPoint> cuts,
                const Mat& a, double step) {
  const double excursion = 4.0 * step * std::max(a.norm(), 1e-300);
  for (const auto& z : cuts) {
    for (const auto& s : spec.spaces()) {
      if (chordal_distance(s.eigenvalue, z.value()) <= excursion) {
        fail(ErrorKind::StepTooLarge, "finite-difference excursion reaches a cut");
      }
    }
  }
}

}  // namespace

Mat projector_derivative(const ArcContext& ctx, const TangentVector& x, Method method, double step) {
  require_base(x, ctx.group_element());
  const auto& spec = ctx.spectrum();
  const int n = spec.dim();
  if (ctx.classification() == ArcClass::Null) return Mat::Zero(n, n);
  if (ctx.classification() == ArcClass::Negative) {
    fail(ErrorKind::Domain, "negative context: evaluate the swapped pair");
  }
  if (method == Method::Residue) {
    std::vector<bool> inside(spec.size(), false);
    for (auto i : ctx.arc_indices()) inside[i] = true;
    return derivative_residue(spec, inside, x.ambient());
  }
  if (method != Method::FiniteDifference) fail(ErrorKind::Domain, "derivative supports residue or fd");
  check_step(spec, {ctx.z1(), ctx.z2()}, x.direction(), step);
  auto projector_at = [&](double t) {
    const auto moved = share(spectral_decompose(flow(ctx.group_element(), x.direction(), t),
                                                spec.cluster_tol()));
    const ArcContext c = classify(ctx.z1(), ctx.z2(), moved);
    if (c.classification() != ctx.classification() || c.arc_dim() != ctx.arc_dim()) {
      fail(ErrorKind::StepTooLarge, "finite-difference step changes the arc");
    }
    return arc_projector(c);
  };
  return (projector_at(step) - projector_at(-step)) / (2.0 * step);
}

Mat single_projector_derivative(const SpectralDecomposition& spec, std::size_t k, const TangentVector& x) {
  require_base(x, spec.matrix());
  if (k >= spec.size()) fail(ErrorKind::Domain, "eigenvalue index out of range");
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (j != k && chordal_distance(spec.eigenvalue(j), spec.eigenvalue(k)) < kIsolationGap) {
      fail(ErrorKind::Gap, "eigenvalue not isolated");
    }
  }
  std::vector<bool> inside(spec.size(), false);
  inside[k] = true;
  return derivative_residue(spec, inside, x.ambient());
}

Mat single_projector_derivative_fd(const SpectralDecomposition& spec, std::size_t k,
                                   const TangentVector& x, double step) {
  require_base(x, spec.matrix());
  if (k >= spec.size()) fail(ErrorKind::Domain, "eigenvalue index out of range");
  const cplx target = spec.eigenvalue(k);
  auto projector_at = [&](double t) {
    const auto moved = spectral_decompose(flow(spec.matrix(), x.direction(), t), spec.cluster_tol());
    std::size_t best = 0;
    for (std::size_t j = 1; j < moved.size(); ++j) {
      if (chordal_distance(moved.eigenvalue(j), target) < chordal_distance(moved.eigenvalue(best), target)) {
        best = j;
      }
    }
    if (moved.multiplicity(best) != spec.multiplicity(k)) {
      fail(ErrorKind::StepTooLarge, "finite-difference step splits the eigenvalue");
    }
    return moved.projector(best);
  };
  return (projector_at(step) - projector_at(-step)) / (2.0 * step);
}

}  // namespace bgerbe
