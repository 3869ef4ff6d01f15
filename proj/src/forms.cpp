#include "bgerbe/forms.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>

#include "bgerbe/error.hpp"
#include "bgerbe/kernels.hpp"
#include "bgerbe/quadrature.hpp"
#include "bgerbe/residue.hpp"

namespace bgerbe {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

cplx trace_product(const Mat& a, const Mat& b) { return a.transpose().cwiseProduct(b).sum(); }

// C_ij = tr(P_i X P_j Y) - tr(P_i Y P_j X), restricted to columns j with keep[j].
Mat pair_coefficients(const SpectralDecomposition& spec, const Mat& x, const Mat& y,
                      const std::vector<bool>& keep) {
  const auto m = static_cast<Eigen::Index>(spec.size());
  std::vector<Mat> px(spec.size());
  std::vector<Mat> py(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    px[i] = spec.projector(i) * x;
    py[i] = spec.projector(i) * y;
  }
  Mat c = Mat::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j || !keep[static_cast<std::size_t>(j)]) continue;
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      c(i, j) = trace_product(px[ui], py[uj]) - trace_product(py[ui], px[uj]);
    }
  }
  return c;
}

// (1/2 pi i) contour integral of [log_z(xi)] sum_ij C_ij (xi - l_i)^{-1} (xi - l_j)^{-2}.
cplx pair_sum_quadrature(const SpectralDecomposition& spec, const Mat& c, const Contour& contour,
                         const std::optional<CutPoint>& log_branch) {
  const std::size_t m = spec.size();
  std::vector<double> lam_re(m), lam_im(m), c_re(m * m), c_im(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    lam_re[i] = spec.eigenvalue(i).real();
    lam_im[i] = spec.eigenvalue(i).imag();
    for (std::size_t j = 0; j < m; ++j) {
      const cplx v = c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      c_re[i * m + j] = v.real();
      c_im[i * m + j] = v.imag();
    }
  }
  std::vector<double> xr, xi, wr, wi;
  auto batch = [&](std::span<const cplx> xs, std::span<const cplx> ws) {
    const std::size_t q = xs.size();
    xr.resize(q);
    xi.resize(q);
    wr.resize(q);
    wi.resize(q);
    for (std::size_t k = 0; k < q; ++k) {
      const cplx w = log_branch ? ws[k] * log_cut(*log_branch, xs[k]) : ws[k];
      xr[k] = xs[k].real();
      xi[k] = xs[k].imag();
      wr[k] = w.real();
      wi[k] = w.imag();
    }
    const kernels::PairSumInput in{xr.data(), xi.data(), wr.data(), wi.data(), q,
                                   lam_re.data(), lam_im.data(), m, c_re.data(), c_im.data()};
    return kernels::pair_sum(in);
  };
  return contour_integral<cplx>(contour, batch, cplx(0.0));
}

// Same integral by residues at the eigenvalues flagged in `enclosed`.
cplx pair_sum_residues(const SpectralDecomposition& spec, const Mat& c, const std::vector<bool>& enclosed,
                       const std::optional<CutPoint>& log_branch) {
  cplx total = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (std::size_t j = 0; j < spec.size(); ++j) {
      const cplx cij = c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (cij == 0.0) continue;
      const Pole poles[] = {{spec.eigenvalue(i), 1}, {spec.eigenvalue(j), 2}};
      if (enclosed[i]) total += cij * residue_at(poles, 0, log_branch);
      if (enclosed[j]) total += cij * residue_at(poles, 1, log_branch);
    }
  }
  return total;
}

std::vector<bool> arc_mask(const ArcContext& ctx) {
  std::vector<bool> mask(ctx.spectrum().size(), false);
  for (auto i : ctx.arc_indices()) mask[i] = true;
  return mask;
}

void require_positive(const ArcContext& ctx) {
  if (ctx.classification() != ArcClass::Positive) fail(ErrorKind::Domain, "expected a positive context");
}

}  // namespace

Mat mc_form(const UnitaryMatrix& g, const TangentVector& x) {
  require_base(x, g);
  return x.direction();
}

cplx antisymmetrize(int k, const std::function<cplx(std::span<const int>)>& term) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  cplx total = 0.0;
  do {
    int inversions = 0;
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        if (perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)]) ++inversions;
      }
    }
    const cplx v = term(std::span<const int>(perm));
    total += inversions % 2 == 0 ? v : -v;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

cplx wedge_trace_eval(std::span<const Mat> coeffs, std::span<const Mat> slots) {
  if (coeffs.size() != slots.size() + 1) fail(ErrorKind::SlotMismatch, "coefficient count must be slot count + 1");
  const int k = static_cast<int>(slots.size());
  return antisymmetrize(k, [&](std::span<const int> perm) {
    Mat acc = coeffs[0];
    for (int s = 0; s < k; ++s) acc = acc * slots[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])] *
                                      coeffs[static_cast<std::size_t>(s + 1)];
    return acc.trace();
  });
}

cplx curvature_via_projectors(const ArcContext& ctx, const TangentVector& x, const TangentVector& y) {
  if (ctx.classification() == ArcClass::Null) return 0.0;
  if (ctx.classification() == ArcClass::Negative) return -curvature_via_projectors(ctx.swapped(), x, y);
  const Mat p = arc_projector(ctx);
  const Mat dx = projector_derivative(ctx, x);
  const Mat dy = projector_derivative(ctx, y);
  return (p * dx * dy).trace() - (p * dy * dx).trace();
}

cplx curvature_via_contour(const ArcContext& ctx, const TangentVector& x, const TangentVector& y, Method method) {
  if (ctx.classification() == ArcClass::Null) return 0.0;
  if (ctx.classification() == ArcClass::Negative) return -curvature_via_contour(ctx.swapped(), x, y, method);
  const auto& spec = ctx.spectrum();
  require_base(x, spec.matrix());
  require_base(y, spec.matrix());
  const std::vector<bool> all(spec.size(), true);
  const Mat c = pair_coefficients(spec, x.ambient(), y.ambient(), all);
  if (method == Method::Quadrature) {
    const Contour contour = arc_contour(ctx.z1(), ctx.z2(), spec);
    return 0.5 * pair_sum_quadrature(spec, c, contour, std::nullopt);
  }
  if (method != Method::Residue) fail(ErrorKind::Domain, "curvature supports residue or quadrature");
  const auto inside = arc_mask(ctx);
  cplx total = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (inside[i]) continue;
    for (std::size_t j = 0; j < spec.size(); ++j) {
      if (!inside[j]) continue;
      const cplx d = spec.eigenvalue(i) - spec.eigenvalue(j);
      total -= c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / (d * d);
    }
  }
  return total;
}

cplx projector_inserted_curvature(const ArcContext& ctx, const TangentVector& x, const TangentVector& y,
                                  Method method) {
  if (ctx.classification() == ArcClass::Null) return 0.0;
  if (ctx.classification() == ArcClass::Negative) {
    return -projector_inserted_curvature(ctx.swapped(), x, y, method);
  }
  const auto& spec = ctx.spectrum();
  require_base(x, spec.matrix());
  require_base(y, spec.matrix());
  const auto inside = arc_mask(ctx);
  // P_j P = P_j inside the arc and 0 outside, so P only filters the second pole.
  const Mat c = pair_coefficients(spec, x.ambient(), y.ambient(), inside);
  if (method == Method::Quadrature) {
    return pair_sum_quadrature(spec, c, arc_contour(ctx.z1(), ctx.z2(), spec), std::nullopt);
  }
  if (method != Method::Residue) fail(ErrorKind::Domain, "integral supports residue or quadrature");
  return pair_sum_residues(spec, c, inside, std::nullopt);
}

cplx curving_on_contour(const CutPoint& z, const SpectralDecomposition& spec, const TangentVector& x,
                        const TangentVector& y, const Contour& contour) {
  require_base(x, spec.matrix());
  require_base(y, spec.matrix());
  const std::vector<bool> all(spec.size(), true);
  const Mat c = pair_coefficients(spec, x.ambient(), y.ambient(), all);
  // (1/8 pi^2) * 2 pi i = i / (4 pi)
  return kI / (4.0 * kPi) * pair_sum_quadrature(spec, c, contour, z);
}

cplx curving_eval(const CutPoint& z, const SpectralDecomposition& spec, const TangentVector& x,
                  const TangentVector& y, Method method) {
  require_clear_cut(z, spec);
  if (method == Method::Quadrature) return curving_on_contour(z, spec, x, y, spectrum_contour(z, spec));
  if (method != Method::Residue) fail(ErrorKind::Domain, "curving supports residue or quadrature");
  require_base(x, spec.matrix());
  require_base(y, spec.matrix());
  const std::vector<bool> all(spec.size(), true);
  const Mat c = pair_coefficients(spec, x.ambient(), y.ambient(), all);
  return kI / (4.0 * kPi) * pair_sum_residues(spec, c, all, z);
}

TwoFormOnY curving_form(Method method) {
  return [method](const CutPoint& z, const SpectralDecomposition& spec, const TangentVector& x,
                  const TangentVector& y) { return curving_eval(z, spec, x, y, method); };
}

cplx delta_pairs(const TwoFormOnY& f, const CutPoint& z1, const CutPoint& z2, const SpectralDecomposition& spec,
                 const TangentVector& x, const TangentVector& y) {
  if (z1 == z2) return 0.0;
  return f(z2, spec, x, y) - f(z1, spec, x, y);
}

cplx basic_three_form(const UnitaryMatrix& g, const TangentVector& x, const TangentVector& y,
                      const TangentVector& z) {
  const int n = g.dim();
  const Mat eye = Mat::Identity(n, n);
  const Mat coeffs[] = {eye, eye, eye, eye};
  const Mat slots[] = {mc_form(g, x), mc_form(g, y), mc_form(g, z)};
  return -wedge_trace_eval(coeffs, slots) / (24.0 * kPi * kPi);
}

cplx omega_three_form(const UnitaryMatrix& g, const TangentVector& x, const TangentVector& y,
                      const TangentVector& z) {
  return 2.0 * kPi * kI * basic_three_form(g, x, y, z);
}

ExteriorDerivative exterior_derivative_fd(const TwoFormOnY& f, const CutPoint& z, const SpectralDecomposition& spec,
                                          const TangentVector& x, const TangentVector& y, const TangentVector& w,
                                          double step) {
  const UnitaryMatrix& g = spec.matrix();
  require_base(x, g);
  require_base(y, g);
  require_base(w, g);
  const Mat dirs[] = {x.direction(), y.direction(), w.direction()};
  double reach = 0.0;
  for (const auto& d : dirs) reach = std::max(reach, d.norm());
  for (const auto& s : spec.spaces()) {
    if (chordal_distance(s.eigenvalue, z.value()) <= 4.0 * step * std::max(reach, 1.0)) {
      fail(ErrorKind::StepTooLarge, "finite-difference excursion reaches the cut");
    }
  }

  // Decompositions at g exp(+-h A_k), shared by the two terms differentiating along A_k.
  std::map<std::pair<int, int>, SpectralDecomposition> moved;
  auto spec_at = [&](int dir, int sign) -> const SpectralDecomposition& {
    auto it = moved.find({dir, sign});
    if (it == moved.end()) {
      it = moved.emplace(std::make_pair(dir, sign),
                         spectral_decompose(flow(g, dirs[dir], sign * step), spec.cluster_tol()))
               .first;
    }
    return it->second;
  };
  auto along = [&](int dir, int a, int b) {
    const auto& plus = spec_at(dir, +1);
    const auto& minus = spec_at(dir, -1);
    const cplx fp = f(z, plus, TangentVector(plus.matrix(), dirs[a]), TangentVector(plus.matrix(), dirs[b]));
    const cplx fm = f(z, minus, TangentVector(minus.matrix(), dirs[a]), TangentVector(minus.matrix(), dirs[b]));
    return (fp - fm) / (2.0 * step);
  };
  auto bracket = [&](int a, int b, int c) {
    const Mat comm = dirs[a] * dirs[b] - dirs[b] * dirs[a];
    return f(z, spec, TangentVector(g, comm), TangentVector(g, dirs[c]));
  };

  ExteriorDerivative out;
  out.value = along(0, 1, 2) - along(1, 0, 2) + along(2, 0, 1) - bracket(0, 1, 2) + bracket(0, 2, 1) -
              bracket(1, 2, 0);
  const CutPoint zp = CutPoint::from_angle(z.angle() + step);
  const CutPoint zm = CutPoint::from_angle(z.angle() - step);
  out.z_derivative = (f(zp, spec, x, y) - f(zm, spec, x, y)) / (2.0 * step);
  return out;
}

Mat gauge_frame(const ArcContext& ctx, const Mat& reference) {
  require_positive(ctx);
  return gram_schmidt(arc_projector(ctx) * reference);
}

FrameAlongCurve frame_along_curve(const ArcContext& ctx, const Mat& direction, const Mat& reference, double step) {
  require_positive(ctx);
  FrameAlongCurve curve{direction, step, {}};
  const double ts[] = {-step, 0.0, step};
  for (int k = 0; k < 3; ++k) {
    if (ts[k] == 0.0) {
      curve.frames[1] = gauge_frame(ctx, reference);
      continue;
    }
    const auto s = share(spectral_decompose(flow(ctx.group_element(), direction, ts[k]),
                                            ctx.spectrum().cluster_tol()));
    const ArcContext c = classify(ctx.z1(), ctx.z2(), s);
    if (c.classification() != ArcClass::Positive || c.arc_dim() != ctx.arc_dim()) {
      fail(ErrorKind::StepTooLarge, "curve leaves the positive stratum");
    }
    curve.frames[static_cast<std::size_t>(k)] = gauge_frame(c, reference);
  }
  for (int k = 0; k < 2; ++k) {
    const Mat q = curve.frames[static_cast<std::size_t>(k)].adjoint() * curve.frames[static_cast<std::size_t>(k + 1)];
    if ((q - Mat::Identity(q.rows(), q.cols())).norm() > 0.1) {
      fail(ErrorKind::Realignment, "frames along the curve are not aligned");
    }
  }
  return curve;
}

cplx connection_one_form(const FrameAlongCurve& curve) {
  const Mat dot = (curve.frames[2] - curve.frames[0]) / (2.0 * curve.step);
  return (curve.frames[1].adjoint() * dot).trace();
}

cplx connection_curvature_fd(const ArcContext& ctx, const TangentVector& x, const TangentVector& y,
                             double outer_step, double inner_step) {
  require_positive(ctx);
  const UnitaryMatrix& g = ctx.group_element();
  require_base(x, g);
  require_base(y, g);
  const Mat reference = arc_basis(ctx).basis;
  const Mat& a = x.direction();
  const Mat& b = y.direction();
  auto context_at = [&](const Mat& dir, double t) {
    const auto s = share(spectral_decompose(flow(g, dir, t), ctx.spectrum().cluster_tol()));
    const ArcContext c = classify(ctx.z1(), ctx.z2(), s);
    if (c.classification() != ArcClass::Positive || c.arc_dim() != ctx.arc_dim()) {
      fail(ErrorKind::StepTooLarge, "stencil leaves the positive stratum");
    }
    return c;
  };
  auto conn = [&](const ArcContext& c, const Mat& dir) {
    return connection_one_form(frame_along_curve(c, dir, reference, inner_step));
  };
  const cplx xa = (conn(context_at(a, outer_step), b) - conn(context_at(a, -outer_step), b)) / (2.0 * outer_step);
  const cplx yb = (conn(context_at(b, outer_step), a) - conn(context_at(b, -outer_step), a)) / (2.0 * outer_step);
  return xa - yb - conn(ctx, a * b - b * a);
}

}  // namespace bgerbe
