#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bgerbe/error.hpp"
#include "bgerbe/fibers.hpp"
#include "bgerbe/forms.hpp"
#include "bgerbe/weyl.hpp"
#include "registry.hpp"

namespace bgerbe::harness {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);

// Default spacing of sampled spectra; finite-difference checks use a wider one
// so the O(h^2) truncation stays below their tolerances.
constexpr double kGap = 1e-3;
constexpr double kFdGap = 0.05;

double scaled(cplx a, cplx b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }
double scaled(const Mat& a, const Mat& b) { return (a - b).norm() / std::max({1.0, a.norm(), b.norm()}); }
double scaled_zero(cplx v, double scale) { return std::abs(v) / std::max(1.0, scale); }

bool away_from_one(const SpectralDecomposition& s, double gap) {
  for (const auto& e : s.spaces()) {
    if (chordal_distance(e.eigenvalue, 1.0) < gap) return false;
  }
  return true;
}

SpectrumPtr sample_spectrum(int n, Rng& rng, double min_gap) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto s = spectral_decompose(random_unitary(n, rng));
    if (static_cast<int>(s.size()) == n && s.min_gap() >= min_gap && away_from_one(s, min_gap)) {
      return share(std::move(s));
    }
  }
  fail(ErrorKind::Config, "could not sample a spectrum with the requested spacing");
}

std::vector<cplx> spread_values(int m, Rng& rng, double min_gap) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<cplx> v;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      const cplx l = std::polar(1.0, angle(rng));
      ok = chordal_distance(l, 1.0) >= min_gap;
      for (const auto& p : v) ok = ok && chordal_distance(l, p) >= min_gap;
      v.push_back(l);
    }
    if (ok) return v;
  }
  fail(ErrorKind::Config, "could not place eigenvalues with the requested spacing");
}

// Spectrum with at least one repeated eigenvalue when n >= 2.
SpectrumPtr sample_degenerate(int n, Rng& rng, double min_gap) {
  const int distinct = n == 1 ? 1 : std::uniform_int_distribution<int>(1, n - 1)(rng);
  std::vector<int> mult(static_cast<std::size_t>(distinct), 1);
  std::uniform_int_distribution<int> pick(0, distinct - 1);
  for (int extra = n - distinct; extra > 0; --extra) ++mult[static_cast<std::size_t>(pick(rng))];
  const auto values = spread_values(distinct, rng, min_gap);
  std::vector<cplx> diag;
  for (int i = 0; i < distinct; ++i) {
    for (int k = 0; k < mult[static_cast<std::size_t>(i)]; ++k) diag.push_back(values[static_cast<std::size_t>(i)]);
  }
  const Mat u = random_unitary(n, rng).matrix();
  const Vec d = Eigen::Map<const Vec>(diag.data(), n);
  auto s = spectral_decompose(UnitaryMatrix(u * d.asDiagonal() * u.adjoint()));
  if (static_cast<int>(s.size()) != distinct) fail(ErrorKind::Evaluation, "degenerate spectrum did not cluster");
  return share(std::move(s));
}

SpectrumPtr sample_mixed(SampleContext& s, double min_gap) {
  if (s.index() % 4 == 3) return sample_degenerate(s.dim(), s.rng(), min_gap);
  return sample_spectrum(s.dim(), s.rng(), min_gap);
}

std::vector<double> sorted_angles(const SpectralDecomposition& spec) {
  std::vector<double> a;
  for (const auto& e : spec.spaces()) a.push_back(angle_of(e.eigenvalue));
  std::sort(a.begin(), a.end());
  return a;
}

// Gaps are numbered 0..m counter-clockwise from 1; gap k ends at the k-th angle.
double angle_in_gap(const std::vector<double>& angles, std::size_t k, Rng& rng) {
  const double lo = k == 0 ? 0.0 : angles[k - 1];
  const double hi = k == angles.size() ? kTwoPi : angles[k];
  const double w = hi - lo;
  return std::uniform_real_distribution<double>(lo + 0.25 * w, hi - 0.25 * w)(rng);
}

// Cuts placed in the given gaps (non-increasing), returned by decreasing angle.
std::vector<CutPoint> cuts_in_gaps(const SpectralDecomposition& spec, const std::vector<std::size_t>& gaps, Rng& rng) {
  const auto angles = sorted_angles(spec);
  std::vector<double> t;
  for (auto g : gaps) t.push_back(angle_in_gap(angles, g, rng));
  std::sort(t.begin(), t.end(), std::greater<>());
  std::vector<CutPoint> out;
  for (double a : t) out.push_back(CutPoint::from_angle(a));
  return out;
}

std::size_t random_gap(const SpectralDecomposition& spec, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, spec.size())(rng);
}

// z1 > z2 with at least one eigenvalue between them.
std::pair<CutPoint, CutPoint> positive_pair(const SpectralDecomposition& spec, Rng& rng) {
  std::size_t a = random_gap(spec, rng);
  std::size_t b = random_gap(spec, rng);
  while (a == b) b = random_gap(spec, rng);
  const auto c = cuts_in_gaps(spec, {std::max(a, b), std::min(a, b)}, rng);
  return {c[0], c[1]};
}

std::pair<CutPoint, CutPoint> null_pair(const SpectralDecomposition& spec, Rng& rng) {
  const std::size_t g = random_gap(spec, rng);
  const auto c = cuts_in_gaps(spec, {g, g}, rng);
  return {c[0], c[1]};
}

CutPoint random_cut(const SpectralDecomposition& spec, Rng& rng) {
  return cuts_in_gaps(spec, {random_gap(spec, rng)}, rng)[0];
}

// Gaps for a sorted triple of the requested type.
std::vector<std::size_t> gaps_for_type(const SpectralDecomposition& spec, TypeClass type, Rng& rng) {
  const std::size_t m = spec.size();
  if (type == TypeClass::OneOne && m < 2) type = TypeClass::OneZero;
  std::vector<std::size_t> all(m + 1);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<std::size_t> g;
  switch (type) {
    case TypeClass::OneOne: g = {all[0], all[1], all[2]}; break;
    case TypeClass::OneZero: g = {all[0], all[1], all[1]}; break;
    case TypeClass::ZeroOne: g = {all[0], all[0], all[1]}; break;
    case TypeClass::ZeroZero: g = {all[0], all[0], all[0]}; break;
  }
  std::sort(g.begin(), g.end(), std::greater<>());
  if (type == TypeClass::OneZero && g[0] == g[1]) std::swap(g[0], g[2]);
  if (type == TypeClass::ZeroOne && g[1] == g[2]) std::swap(g[0], g[2]);
  std::sort(g.begin(), g.end(), std::greater<>());
  return g;
}

TangentVector tangent(const SpectralDecomposition& spec, Rng& rng) { return tangent_random(spec.matrix(), rng); }

// Direction commuting with g.
TangentVector torus_direction(const SpectralDecomposition& spec, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat a = Mat::Zero(spec.dim(), spec.dim());
  for (std::size_t i = 0; i < spec.size(); ++i) a += kI * normal(rng) * spec.projector(i);
  return TangentVector(spec.matrix(), a);
}

std::string type_suffix(TypeClass t) {
  switch (t) {
    case TypeClass::OneOne: return "11";
    case TypeClass::OneZero: return "10";
    case TypeClass::ZeroOne: return "01";
    case TypeClass::ZeroZero: return "00";
  }
  return "";
}

int permutation_sign(const std::vector<int>& p) {
  int s = 1;
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (std::size_t b = a + 1; b < p.size(); ++b) {
      if (p[a] > p[b]) s = -s;
    }
  }
  return s;
}

// ---- suites ---------------------------------------------------------------

void run_projectors(SampleContext& s) {
  const auto spec = sample_mixed(s, kGap);
  const auto [z1, z2] = positive_pair(*spec, s.rng());
  const ArcContext ctx = classify(z1, z2, spec);
  const Mat pr = arc_projector(ctx, Method::Residue);
  const Mat pq = arc_projector(ctx, Method::Quadrature);
  const int n = spec->dim();
  s.record("projector.residue_vs_quadrature", scaled(pr, pq));
  s.record("projector.trace_integer",
           std::max(std::abs(pq.trace() - std::round(pq.trace().real())), std::abs(pq.trace() - double(ctx.arc_dim()))));
  s.record("projector.idempotent", std::max((pq * pq - pq).norm(), (pq - pq.adjoint()).norm()));

  // Arcs from just above 1 to z2, z2 to z1 and z1 to just below 1 tile the circle.
  const auto angles = sorted_angles(*spec);
  const double eps = 0.5 * std::min(angles.front(), kTwoPi - angles.back());
  const CutPoint lo = CutPoint::from_angle(eps);
  const CutPoint hi = CutPoint::from_angle(kTwoPi - eps);
  Mat total = pq;
  for (const auto& c : {classify(z2, lo, spec), classify(hi, z1, spec)}) {
    if (c.classification() == ArcClass::Positive) total += arc_projector(c, Method::Quadrature);
  }
  s.record("projector.partition", (total - Mat::Identity(n, n)).norm());
  const Mat other = classify(z2, lo, spec).classification() == ArcClass::Positive
                        ? arc_projector(classify(z2, lo, spec), Method::Quadrature)
                        : Mat::Zero(n, n);
  s.record("projector.mutual_orthogonality", (pq * other).norm());

  const ArcEigenspace e = arc_basis(ctx);
  double residual = (e.basis.adjoint() * e.basis - Mat::Identity(e.dim(), e.dim())).norm();
  for (int c = 0; c < e.dim(); ++c) {
    residual = std::max(residual, (spec->matrix().matrix() * e.basis.col(c) -
                                   e.eigenvalues[static_cast<std::size_t>(c)] * e.basis.col(c)).norm());
  }
  s.record("arc_basis.eigen_residual", residual);

  const auto moved = share(spectral_decompose(flow(spec->matrix(), random_skew_hermitian(n, s.rng()), 1e-4)));
  const ArcContext cm = classify(z1, z2, moved);
  s.record("projector.local_constancy", std::abs(arc_projector(cm, Method::Quadrature).trace() - pq.trace()));
}

void run_derivative(SampleContext& s) {
  const auto spec = sample_mixed(s, kFdGap);
  const auto [z1, z2] = positive_pair(*spec, s.rng());
  const ArcContext ctx = classify(z1, z2, spec);
  const TangentVector x = tangent(*spec, s.rng());
  const int n = spec->dim();
  const Mat p = arc_projector(ctx);
  const Mat q = Mat::Identity(n, n) - p;
  const Mat dr = projector_derivative(ctx, x, Method::Residue);
  const Mat dfd = projector_derivative(ctx, x, Method::FiniteDifference);
  s.record("dP.residue_vs_fd", scaled(dr, dfd));
  s.record("dP.pdpp", (p * dr * p).norm() / std::max(1.0, dr.norm()));
  s.record("dP.block_form", (dr - p * dr * q - q * dr * p).norm() / std::max(1.0, dr.norm()));
  s.record("dP.torus_direction", projector_derivative(ctx, torus_direction(*spec, s.rng())).norm());

  if (static_cast<int>(spec->size()) == n) {
    const std::size_t k = s.index() % spec->size();
    s.record("dP.single_vs_fd",
             scaled(single_projector_derivative(*spec, k, x), single_projector_derivative_fd(*spec, k, x)));
    Mat sum = Mat::Zero(n, n);
    double scale = 1.0;
    for (std::size_t j = 0; j < spec->size(); ++j) {
      const Mat d = single_projector_derivative(*spec, j, x);
      scale = std::max(scale, d.norm());
      sum += d;
    }
    s.record("dP.single_completeness", sum.norm() / scale);
  }
}

void run_curvature(SampleContext& s) {
  const auto spec = sample_mixed(s, kGap);
  const auto [z1, z2] = positive_pair(*spec, s.rng());
  const ArcContext ctx = classify(z1, z2, spec);
  const TangentVector x = tangent(*spec, s.rng());
  const TangentVector y = tangent(*spec, s.rng());
  const cplx fp = curvature_via_projectors(ctx, x, y);
  const cplx fr = curvature_via_contour(ctx, x, y, Method::Residue);
  const cplx fq = curvature_via_contour(ctx, x, y, Method::Quadrature);
  s.record("curvature.projectors_vs_residue", scaled(fp, fr));
  s.record("curvature.quadrature_vs_residue", scaled(fq, fr));
  s.record("curvature.projectors_vs_quadrature", scaled(fp, fq));
  s.record("curvature.inserted_vs_contour",
           std::max(scaled(projector_inserted_curvature(ctx, x, y, Method::Quadrature), fq),
                    scaled(projector_inserted_curvature(ctx, x, y, Method::Residue), fr)));
  s.record("curvature.torus_direction", std::abs(curvature_via_contour(ctx, torus_direction(*spec, s.rng()), y)));

  if (s.due("curvature.connection_fd")) {
    const auto wide = sample_spectrum(s.dim(), s.rng(), 0.2);
    const auto [w1, w2] = positive_pair(*wide, s.rng());
    const ArcContext c = classify(w1, w2, wide);
    const TangentVector a = tangent(*wide, s.rng());
    const TangentVector b = tangent(*wide, s.rng());
    s.record("curvature.connection_fd", scaled(connection_curvature_fd(c, a, b), curvature_via_projectors(c, a, b)));
  }
  if (s.due("connection.additivity") && spec->size() >= 2) {
    const auto wide = sample_spectrum(s.dim(), s.rng(), kFdGap);
    const auto cuts = cuts_in_gaps(*wide, gaps_for_type(*wide, TypeClass::OneOne, s.rng()), s.rng());
    const ArcContext c12 = classify(cuts[0], cuts[1], wide);
    const ArcContext c23 = classify(cuts[1], cuts[2], wide);
    const ArcContext c13 = classify(cuts[0], cuts[2], wide);
    const Mat r12 = arc_basis(c12).basis;
    const Mat r23 = arc_basis(c23).basis;
    Mat r13(wide->dim(), r12.cols() + r23.cols());
    r13 << r12, r23;
    const Mat dir = random_skew_hermitian(wide->dim(), s.rng());
    const auto f12 = frame_along_curve(c12, dir, r12);
    const auto f23 = frame_along_curve(c23, dir, r23);
    const auto f13 = frame_along_curve(c13, dir, r13);
    // d log of the section scalar det(F13^dagger [F12 | F23]) along the curve.
    auto sigma = [&](int k) {
      Mat cat(wide->dim(), r13.cols());
      cat << f12.frames[static_cast<std::size_t>(k)], f23.frames[static_cast<std::size_t>(k)];
      return (f13.frames[static_cast<std::size_t>(k)].adjoint() * cat).determinant();
    };
    const cplx dlog = (sigma(2) - sigma(0)) / (2.0 * f12.step) / sigma(1);
    const cplx lhs = connection_one_form(f12) + connection_one_form(f23) - connection_one_form(f13);
    s.record("connection.additivity", scaled(lhs, dlog));
  }
}

void run_curving(SampleContext& s) {
  const auto spec = sample_mixed(s, kGap);
  const CutPoint z = random_cut(*spec, s.rng());
  const TangentVector x = tangent(*spec, s.rng());
  const TangentVector y = tangent(*spec, s.rng());
  const cplx fr = curving_eval(z, *spec, x, y, Method::Residue);
  const cplx fq = curving_eval(z, *spec, x, y, Method::Quadrature);
  s.record("curving.residue_vs_quadrature", scaled(fr, fq));

  // A wider, differently padded sector around the same spectrum.
  double ccw = kTwoPi;
  double cw = kTwoPi;
  for (const auto& e : spec->spaces()) {
    double d = angle_of(e.eigenvalue) - z.angle();
    if (d <= 0.0) d += kTwoPi;
    ccw = std::min(ccw, d);
    cw = std::min(cw, kTwoPi - d);
  }
  const Contour other = annular_sector(z.angle() + 0.2 * ccw, z.angle() + kTwoPi - 0.7 * cw, 0.3, 2.0);
  s.record("curving.contour_deformation", scaled(curving_on_contour(z, *spec, x, y, other), fq));

  const double h = kFdStep;
  const cplx fp = curving_eval(CutPoint::from_angle(z.angle() + h), *spec, x, y, Method::Quadrature);
  const cplx fm = curving_eval(CutPoint::from_angle(z.angle() - h), *spec, x, y, Method::Quadrature);
  s.record("curving.z_derivative", scaled_zero((fp - fm) / (2.0 * h), std::abs(fq)));

  s.record("curving.torus_direction", std::abs(curving_eval(z, *spec, torus_direction(*spec, s.rng()), y)));
  s.record("curving.antisymmetry", scaled(curving_eval(z, *spec, y, x), -fr));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double a = normal(s.rng());
  const double b = normal(s.rng());
  const TangentVector w = tangent(*spec, s.rng());
  const TangentVector combo(spec->matrix(), a * x.direction() + b * w.direction());
  s.record("curving.linearity", scaled(curving_eval(z, *spec, combo, y), a * fr + b * curving_eval(z, *spec, w, y)));
}

void run_delta_curving(SampleContext& s) {
  const auto spec = sample_mixed(s, kGap);
  const TangentVector x = tangent(*spec, s.rng());
  const TangentVector y = tangent(*spec, s.rng());
  const auto fr = curving_form(Method::Residue);
  switch (s.index() % 3) {
    case 0: {
      const auto [z1, z2] = positive_pair(*spec, s.rng());
      const ArcContext ctx = classify(z1, z2, spec);
      const cplx f = curvature_via_projectors(ctx, x, y);
      s.record("delta.positive", scaled(delta_pairs(fr, z1, z2, *spec, x, y), f));
      s.record("delta.positive_quadrature", scaled(delta_pairs(curving_form(Method::Quadrature), z1, z2, *spec, x, y), f));
      s.record("delta.swap", scaled(delta_pairs(fr, z2, z1, *spec, x, y), -delta_pairs(fr, z1, z2, *spec, x, y)));
      break;
    }
    case 1: {
      const auto [z1, z2] = null_pair(*spec, s.rng());
      const cplx scale = curving_eval(z1, *spec, x, y);
      s.record("delta.null", scaled_zero(delta_pairs(fr, z1, z2, *spec, x, y), std::abs(scale)));
      s.record("delta.null_curvature", std::abs(curvature_via_projectors(classify(z1, z2, spec), x, y)));
      break;
    }
    default: {
      const auto [z2, z1] = positive_pair(*spec, s.rng());
      const ArcContext ctx = classify(z1, z2, spec);
      s.record("delta.negative", scaled(delta_pairs(fr, z1, z2, *spec, x, y), curvature_via_projectors(ctx, x, y)));
      break;
    }
  }
}

void run_three_curvature(SampleContext& s) {
  const int n = s.dim();
  if (s.due("df.fd_vs_omega")) {
    const auto spec = sample_spectrum(n, s.rng(), kFdGap);
    const CutPoint z = random_cut(*spec, s.rng());
    const TangentVector x = tangent(*spec, s.rng());
    const TangentVector y = tangent(*spec, s.rng());
    const TangentVector w = tangent(*spec, s.rng());
    const auto d = exterior_derivative_fd(curving_form(Method::Residue), z, *spec, x, y, w);
    s.record("df.fd_vs_omega", scaled(d.value, omega_three_form(spec->matrix(), x, y, w)));
    s.record("df.z_derivative", scaled_zero(d.z_derivative, std::abs(curving_eval(z, *spec, x, y))));
  }

  const FlagTorusPoint pt = sample_regular(n, s.rng(), kSampleGap);
  const FlagTangent t1 = random_flag_tangent(pt, s.rng());
  const FlagTangent t2 = random_flag_tangent(pt, s.rng());
  const FlagTangent t3 = random_flag_tangent(pt, s.rng());
  const auto spec = share(spectral_decompose(weyl_apply(pt)));
  const CutPoint z = random_cut(*spec, s.rng());
  const cplx closed = pullback_df_closed(pt, z, t1, t2, t3);
  const auto nu = pullback_nu_closed(pt, t1, t2, t3);
  s.record("df.closed_vs_nu", scaled(closed, nu.simplified));
  s.record("df.closed_vs_raw_nu", scaled(closed, nu.raw));
  double spread = 0.0;
  for (int k = 0; k < 10; ++k) spread = std::max(spread, scaled(pullback_df_closed(pt, random_cut(*spec, s.rng()), t1, t2, t3), closed));
  s.record("df.closed_z_independence", spread);

  if (s.due("df.closed_vs_fd")) {
    const FlagTorusPoint wide = sample_regular(n, s.rng(), kFdGap);
    const FlagTangent u1 = random_flag_tangent(wide, s.rng());
    const FlagTangent u2 = random_flag_tangent(wide, s.rng());
    const FlagTangent u3 = random_flag_tangent(wide, s.rng());
    const auto ws = spectral_decompose(weyl_apply(wide));
    const CutPoint zw = random_cut(ws, s.rng());
    const auto d = exterior_derivative_fd(curving_form(Method::Residue), zw, ws, weyl_tangent(wide, u1),
                                          weyl_tangent(wide, u2), weyl_tangent(wide, u3));
    s.record("df.closed_vs_fd", scaled(pullback_df_closed(wide, zw, u1, u2, u3), d.value));
  }
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

void run_weyl(SampleContext& s) {
  const int n = s.dim();
  const FlagTorusPoint pt = sample_regular(n, s.rng(), kSampleGap);
  const UnitaryMatrix g = weyl_apply(pt);
  const FlagTangent t1 = random_flag_tangent(pt, s.rng());
  const FlagTangent t2 = random_flag_tangent(pt, s.rng());
  const FlagTangent t3 = random_flag_tangent(pt, s.rng());
  const TangentVector x1 = weyl_tangent(pt, t1);
  const TangentVector x2 = weyl_tangent(pt, t2);
  const TangentVector x3 = weyl_tangent(pt, t3);

  if (s.due("weyl.preimage_count")) {
    s.record("weyl.preimage_count", std::abs(double(preimage_count(g) - factorial(n))));
  }
  const Mat lhs = TangentVector::from_ambient(g, weyl_tangent_ambient(pt, t1)).direction();
  s.record("weyl.mc_pullback", scaled(lhs, mc_pullback(pt, t1)));

  // Curve through pt with velocity (dlambda, dP) built from the same K as t1.
  {
    const Mat k = random_skew_hermitian(n, s.rng());
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> theta;
    for (int i = 0; i < n; ++i) theta.push_back(normal(s.rng()));
    auto point_at = [&](double t) {
      FlagTorusPoint q;
      const Mat e = expm_skew(t * k);
      for (int i = 0; i < n; ++i) {
        q.projections.push_back(e * pt.projections[static_cast<std::size_t>(i)] * e.adjoint());
        q.lambda.push_back(pt.lambda[static_cast<std::size_t>(i)] * std::polar(1.0, t * theta[static_cast<std::size_t>(i)]));
      }
      return q;
    };
    FlagTangent v;
    for (int i = 0; i < n; ++i) {
      const Mat& p = pt.projections[static_cast<std::size_t>(i)];
      v.dlambda.push_back(kI * theta[static_cast<std::size_t>(i)] * pt.lambda[static_cast<std::size_t>(i)]);
      v.dP.push_back(k * p - p * k);
    }
    const double h = kFdStep;
    const Mat fd = (weyl_apply(point_at(h)).matrix() - weyl_apply(point_at(-h)).matrix()) / (2.0 * h);
    s.record("weyl.tangent_fd", scaled(fd, weyl_tangent_ambient(pt, v)));
  }

  const auto nu = pullback_nu_closed(pt, t1, t2, t3);
  s.record("weyl.raw_vs_simplified", scaled(nu.raw, nu.simplified));
  s.record("weyl.simplified_vs_omega", scaled(nu.simplified, omega_three_form(g, x1, x2, x3)));

  const auto spec = spectral_decompose(g);
  const CutPoint z = random_cut(spec, s.rng());
  s.record("weyl.curving_closed_vs_eval", scaled(pullback_curving_closed(pt, z, t1, t2), curving_eval(z, spec, x1, x2)));

  FlagTangent flat = t1;
  for (auto& d : flat.dP) d.setZero();
  FlagTangent flat2 = t2;
  for (auto& d : flat2.dP) d.setZero();
  FlagTangent flat3 = t3;
  for (auto& d : flat3.dP) d.setZero();
  const auto nu0 = pullback_nu_closed(pt, flat, flat2, flat3);
  s.record("weyl.torus_only", std::max({std::abs(nu0.raw), std::abs(nu0.simplified),
                                        std::abs(pullback_curving_closed(pt, z, flat, flat2))}));
}

void run_gerbe_axioms(SampleContext& s) {
  const auto spec = sample_mixed(s, kGap);
  Rng& rng = s.rng();
  const auto target = static_cast<TypeClass>(s.index() % 4);
  auto gaps = gaps_for_type(*spec, target, rng);
  gaps.push_back(std::uniform_int_distribution<std::size_t>(0, gaps.back())(rng));
  const auto cuts = cuts_in_gaps(*spec, gaps, rng);
  const TypeClass type = triple_type(cuts[0], cuts[1], cuts[2], spec);
  const std::string suffix = type_suffix(type);

  // Section over all orderings of the first three cuts.
  const cplx sorted = section_value(cuts[0], cuts[1], cuts[2], spec).value;
  std::vector<int> perm = {0, 1, 2};
  double norm_err = 0.0;
  double anti_err = 0.0;
  do {
    const cplx v = section_value(cuts[static_cast<std::size_t>(perm[0])], cuts[static_cast<std::size_t>(perm[1])],
                                 cuts[static_cast<std::size_t>(perm[2])], spec)
                       .value;
    norm_err = std::max(norm_err, std::abs(std::abs(v) - 1.0));
    const cplx expected = permutation_sign(perm) > 0 ? sorted : 1.0 / sorted;
    anti_err = std::max(anti_err, std::abs(v - expected));
  } while (std::next_permutation(perm.begin(), perm.end()));
  s.record("section.unit_norm", norm_err);
  s.record("section.antisymmetry", anti_err);

  // Associativity over every ordering of four cuts.
  std::vector<int> p4 = {0, 1, 2, 3};
  double assoc = 0.0;
  do {
    assoc = std::max(assoc, associativity_check(cuts[static_cast<std::size_t>(p4[0])], cuts[static_cast<std::size_t>(p4[1])],
                                                cuts[static_cast<std::size_t>(p4[2])], cuts[static_cast<std::size_t>(p4[3])],
                                                spec, rng));
  } while (std::next_permutation(p4.begin(), p4.end()));
  s.record("associativity.type" + suffix, assoc);

  const ArcContext c12 = classify(cuts[0], cuts[1], spec);
  const ArcContext c23 = classify(cuts[1], cuts[2], spec);
  const auto a = random_unit_element(c12, rng);
  s.record("line.dual_pairing", std::abs(pair(a, dual_transport(a)) - 1.0));
  const auto unit = fiber_element(c12, 1.0);
  s.record("line.swap_is_dual", same_element(dual_transport(unit), fiber_element(c12.swapped(), 1.0)).discrepancy);

  std::uniform_real_distribution<double> mag(0.1, 3.0);
  const double ma = mag(rng);
  const double mb = mag(rng);
  const auto big_a = DetLineElement(a.context(), a.kind(), a.frame(), ma * a.coeff());
  const auto b = random_unit_element(c23, rng);
  const auto big_b = DetLineElement(b.context(), b.kind(), b.frame(), mb * b.coeff());
  const double prod = gerbe_product(big_a, big_b).norm();
  s.record("product.norm", std::abs(prod - ma * mb) / std::max(1.0, ma * mb));

  if (a.kind() != LineKind::Scalar) {
    const Mat q = random_unitary(static_cast<int>(a.frame().cols()), rng).matrix();
    s.record("element.reframe", same_element(a, with_frame(a, a.frame() * q)).discrepancy);
  }
}

void run_equivariance(SampleContext& s) {
  const auto spec = sample_mixed(s, kGap);
  Rng& rng = s.rng();
  const int n = s.dim();
  const UnitaryMatrix k = random_unitary(n, rng);
  const auto conj_spec = share(spectral_decompose(UnitaryMatrix(k.matrix() * spec->matrix().matrix() * k.adjoint())));
  const auto cuts = cuts_in_gaps(*spec, gaps_for_type(*spec, static_cast<TypeClass>(s.index() % 4), rng), rng);

  const ArcContext c12 = classify(cuts[0], cuts[1], spec);
  const Mat p = arc_projector(c12);
  s.record("equivariance.projector",
           scaled(arc_projector(classify(cuts[0], cuts[1], conj_spec)), k.matrix() * p * k.adjoint()));

  const ArcContext c23 = classify(cuts[1], cuts[2], spec);
  const auto a = random_unit_element(c12, rng);
  const auto b = random_unit_element(c23, rng);
  const auto lhs = conjugate_fiber(k, gerbe_product(a, b), conj_spec);
  const auto rhs = gerbe_product(conjugate_fiber(k, a, conj_spec), conjugate_fiber(k, b, conj_spec));
  s.record("equivariance.product", same_element(lhs, rhs).discrepancy);
  s.record("equivariance.fiber_norm", std::abs(conjugate_fiber(k, a, conj_spec).norm() - a.norm()));
  s.record("equivariance.section", std::abs(section_value(cuts[0], cuts[1], cuts[2], conj_spec).value -
                                            section_value(cuts[0], cuts[1], cuts[2], spec).value));
  if (a.kind() != LineKind::Scalar) {
    const Mat q = random_unitary(static_cast<int>(a.frame().cols()), rng).matrix();
    s.record("equivariance.frame_independence",
             same_element(conjugate_fiber(k, a, conj_spec), conjugate_fiber(k, with_frame(a, a.frame() * q), conj_spec))
                 .discrepancy);
  }

  // Fibre map over the Weyl morphism from a diagonal torus element.
  const auto values = spread_values(n, rng, kGap);
  const auto torus = share(spectral_decompose(UnitaryMatrix::diagonal(values)));
  const UnitaryMatrix h = random_unitary(n, rng);
  const auto image = share(spectral_decompose(UnitaryMatrix(h.matrix() * torus->matrix().matrix() * h.adjoint())));
  const auto tc = cuts_in_gaps(*torus, gaps_for_type(*torus, static_cast<TypeClass>((s.index() / 4) % 4), rng), rng);
  const auto ta = random_unit_element(classify(tc[0], tc[1], torus), rng);
  const auto tb = random_unit_element(classify(tc[1], tc[2], torus), rng);
  const auto mapped = weyl_line_map(h, gerbe_product(ta, tb), image);
  const auto mapped_parts = gerbe_product(weyl_line_map(h, ta, image), weyl_line_map(h, tb, image));
  s.record("weyl_map.product", same_element(mapped, mapped_parts).discrepancy);
  s.record("weyl_map.identity",
           same_element(weyl_line_map(UnitaryMatrix::identity(n), ta, torus), ta).discrepancy);
}

void run_truncation(SampleContext& s) {
  const auto spec = sample_spectrum(s.dim(), s.rng(), kGap);
  Rng& rng = s.rng();
  const int big = s.dim() + 1 + static_cast<int>(s.index() % 4);
  const auto espec = share(spectral_decompose(embed_block(spec->matrix(), big)));
  const TangentVector x = tangent(*spec, rng);
  const TangentVector y = tangent(*spec, rng);
  const TangentVector w = tangent(*spec, rng);
  const TangentVector ex = embed_tangent(x, big);
  const TangentVector ey = embed_tangent(y, big);
  const TangentVector ew = embed_tangent(w, big);
  const auto [z1, z2] = positive_pair(*spec, rng);
  const ArcContext c = classify(z1, z2, spec);
  const ArcContext ec = classify(z1, z2, espec);

  s.record("truncation.curvature",
           std::max({scaled(curvature_via_projectors(c, x, y), curvature_via_projectors(ec, ex, ey)),
                     scaled(curvature_via_contour(c, x, y), curvature_via_contour(ec, ex, ey)),
                     scaled(curvature_via_contour(c, x, y, Method::Quadrature),
                            curvature_via_contour(ec, ex, ey, Method::Quadrature))}));
  s.record("truncation.inserted",
           scaled(projector_inserted_curvature(c, x, y), projector_inserted_curvature(ec, ex, ey)));
  s.record("truncation.curving",
           std::max(scaled(curving_eval(z1, *spec, x, y), curving_eval(z1, *espec, ex, ey)),
                    scaled(curving_eval(z1, *spec, x, y, Method::Quadrature),
                           curving_eval(z1, *espec, ex, ey, Method::Quadrature))));
  const auto f = curving_form();
  s.record("truncation.delta", scaled(delta_pairs(f, z1, z2, *spec, x, y), delta_pairs(f, z1, z2, *espec, ex, ey)));
  s.record("truncation.nu", scaled(basic_three_form(spec->matrix(), x, y, w), basic_three_form(espec->matrix(), ex, ey, ew)));
  const Mat p = arc_projector(c);
  s.record("truncation.projector", (arc_projector(ec).topLeftCorner(s.dim(), s.dim()) - p).norm());
}

std::vector<SuiteDef> build_registry() {
  std::vector<SuiteDef> r;
  r.push_back({"projectors",
               {{"projector.residue_vs_quadrature", "arc projector: eigenprojector sum equals resolvent contour integral", 1e-10},
                {"projector.trace_integer", "trace of the arc projector is the arc eigenspace dimension", 1e-10},
                {"projector.idempotent", "arc projector is an orthogonal projection", 1e-10},
                {"projector.partition", "projectors of arcs tiling the cut circle sum to the identity", 1e-10},
                {"projector.mutual_orthogonality", "projectors of disjoint arcs annihilate each other", 1e-10},
                {"arc_basis.eigen_residual", "canonical arc frame is orthonormal and consists of eigenvectors", 1e-9},
                {"projector.local_constancy", "arc projector trace is locally constant in g", 1e-10}},
               run_projectors});
  r.push_back({"derivative",
               {{"dP.residue_vs_fd", "projector derivative: resolvent formula equals central difference", 1e-6},
                {"dP.pdpp", "P dP P vanishes", 1e-10},
                {"dP.block_form", "dP is off-diagonal with respect to P", 1e-10},
                {"dP.torus_direction", "dP vanishes on directions commuting with g", 1e-10},
                {"dP.single_vs_fd", "single eigenprojector derivative equals central difference", 1e-6},
                {"dP.single_completeness", "eigenprojector derivatives sum to zero", 1e-10}},
               run_derivative});
  r.push_back({"curvature-equivalence",
               {{"curvature.projectors_vs_residue", "tr(P dP dP) equals the residue closed form", 1e-8},
                {"curvature.quadrature_vs_residue", "resolvent contour integral equals the residue closed form", 1e-8},
                {"curvature.projectors_vs_quadrature", "tr(P dP dP) equals the resolvent contour integral", 1e-8},
                {"curvature.inserted_vs_contour", "projector-inserted contour integral equals the curvature", 1e-9},
                {"curvature.torus_direction", "curvature vanishes on directions commuting with g", 1e-10},
                {"curvature.connection_fd", "exterior derivative of the projected connection equals the curvature", 1e-4, 5},
                {"connection.additivity", "connection forms add under frame concatenation up to d log of the section", 1e-6, 5}},
               run_curvature});
  r.push_back({"curving",
               {{"curving.residue_vs_quadrature", "curving: residue sum equals log-weighted contour integral", 1e-9},
                {"curving.contour_deformation", "curving is unchanged under contour deformation", 1e-10},
                {"curving.z_derivative", "curving is locally constant in the cut point", 1e-6},
                {"curving.torus_direction", "curving vanishes on directions commuting with g", 1e-10},
                {"curving.antisymmetry", "curving is antisymmetric", 1e-10},
                {"curving.linearity", "curving is linear in each slot", 1e-10}},
               run_curving});
  r.push_back({"delta-curving",
               {{"delta.positive", "difference of curvings equals the curvature on positive pairs", 1e-8},
                {"delta.positive_quadrature", "same identity with both curvings by quadrature", 1e-8},
                {"delta.swap", "difference of curvings changes sign under swapping the cuts", 1e-8},
                {"delta.null", "difference of curvings vanishes on null pairs", 1e-8},
                {"delta.null_curvature", "curvature vanishes on null pairs", 0.0},
                {"delta.negative", "difference of curvings equals the curvature on negative pairs", 1e-8}},
               run_delta_curving});
  r.push_back({"three-curvature",
               {{"df.fd_vs_omega", "finite-difference exterior derivative of the curving equals -(i/12 pi) tr(theta^3)", 1e-4, 5},
                {"df.z_derivative", "exterior derivative has no cut-point component", 1e-6, 5},
                {"df.closed_vs_nu", "closed pulled-back df equals the simplified pulled-back three-form", 1e-9},
                {"df.closed_vs_raw_nu", "closed pulled-back df equals the raw pulled-back three-form", 1e-9},
                {"df.closed_z_independence", "closed pulled-back df does not depend on the cut point", 1e-12},
                {"df.closed_vs_fd", "closed pulled-back df equals the finite-difference exterior derivative", 1e-4, 5}},
               run_three_curvature});
  r.push_back({"weyl",
               {{"weyl.preimage_count", "regular elements have n! preimages", 0.0},
                {"weyl.mc_pullback", "pulled-back Maurer-Cartan form in flag coordinates", 1e-10},
                {"weyl.tangent_fd", "tangent map equals the central difference along a curve", 1e-6},
                {"weyl.raw_vs_simplified", "raw and simplified pulled-back three-forms agree", 1e-9},
                {"weyl.simplified_vs_omega", "pulled-back three-form equals 2 pi i nu at the image", 1e-8},
                {"weyl.curving_closed_vs_eval", "closed pulled-back curving equals the curving at the image", 1e-8},
                {"weyl.torus_only", "pulled-back forms vanish on pure torus directions", 1e-12}},
               run_weyl});
  std::vector<CheckDef> gerbe = {
      {"section.unit_norm", "the section has unit length", 1e-10},
      {"section.antisymmetry", "the section is antisymmetric under permuting the cuts", 1e-9}};
  for (const char* t : {"11", "10", "01", "00"}) {
    gerbe.push_back({std::string("associativity.type") + t, "the product is associative in every ordering of four cuts", 1e-9});
  }
  gerbe.push_back({"line.dual_pairing", "a unit element pairs to one with its swapped dual", 1e-9});
  gerbe.push_back({"line.swap_is_dual", "the line over a swapped pair is the dual line", 1e-9});
  gerbe.push_back({"product.norm", "the product is multiplicative in norm", 1e-10});
  gerbe.push_back({"element.reframe", "elements do not depend on the frame used to store them", 1e-9});
  r.push_back({"gerbe-axioms", gerbe, run_gerbe_axioms});
  r.push_back({"equivariance",
               {{"equivariance.projector", "arc projectors commute with conjugation", 1e-9},
                {"equivariance.product", "conjugation respects the product", 1e-9},
                {"equivariance.fiber_norm", "conjugation preserves norms", 1e-9},
                {"equivariance.section", "the section is conjugation invariant", 1e-9},
                {"equivariance.frame_independence", "conjugation does not depend on the stored frame", 1e-9},
                {"weyl_map.product", "the Weyl fibre map respects the product", 1e-9},
                {"weyl_map.identity", "the Weyl fibre map at the identity coset is the identity", 1e-9}},
               run_equivariance});
  r.push_back({"truncation",
               {{"truncation.curvature", "curvature is invariant under block embedding", 1e-10},
                {"truncation.inserted", "projector-inserted integral is invariant under block embedding", 1e-10},
                {"truncation.curving", "curving is invariant under block embedding", 1e-10},
                {"truncation.delta", "difference of curvings is invariant under block embedding", 1e-10},
                {"truncation.nu", "basic three-form is invariant under block embedding", 1e-10},
                {"truncation.projector", "arc projector embeds as a zero-padded block", 1e-10}},
               run_truncation});
  return r;
}

}  // namespace

bool SampleContext::due(const std::string& check) const {
  return index_ % static_cast<std::uint64_t>(checks_[find(check)].stride) == 0;
}

void SampleContext::record(const std::string& check, double error) {
  const std::size_t i = find(check);
  if (index_ % static_cast<std::uint64_t>(checks_[i].stride) != 0) return;
  obs_.emplace_back(i, error);
}

std::size_t SampleContext::find(const std::string& check) const {
  for (std::size_t i = 0; i < checks_.size(); ++i) {
    if (checks_[i].name == check) return i;
  }
  fail(ErrorKind::Config, "unregistered check " + check);
}

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> r = build_registry();
  return r;
}

}  // namespace bgerbe::harness
