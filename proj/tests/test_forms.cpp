#include "bgerbe/forms.hpp"
#include "test_util.hpp"

using namespace bgerbe;
using namespace testing;

namespace {
const double kPi = std::numbers::pi;
CutPoint at(double t) { return CutPoint::from_angle(t); }

// Values below are frozen from tests/oracles/derive.py (40-digit mpmath).
Mat a2() { return mat2(0.0, 1.0, -1.0, 0.0); }
Mat b2() { return mat2(0.0, kI, kI, 0.0); }
Mat c2() { return mat2(0.3 * kI, cplx(1.0, 0.2), cplx(-1.0, 0.2), -0.5 * kI); }
Mat d2() { return mat2(0.0, cplx(0.4, -0.7), cplx(-0.4, -0.7), 0.9 * kI); }

UnitaryMatrix g3() {
  Mat u(3, 3);
  u << 0.6, 0.8 * kI, 0.0, 0.8 * kI, 0.6, 0.0, 0.0, 0.0, 1.0;
  Vec d(3);
  d << std::polar(1.0, 0.5), std::polar(1.0, 2.0), std::polar(1.0, 4.0);
  return UnitaryMatrix(u * d.asDiagonal() * u.adjoint());
}
Mat a3() {
  Mat m(3, 3);
  m << 0.2 * kI, cplx(0.5, 0.1), -0.3, cplx(-0.5, 0.1), -0.4 * kI, cplx(0.7, 0.2), 0.3, cplx(-0.7, 0.2), 0.1 * kI;
  return m;
}
Mat b3() {
  Mat m(3, 3);
  m << -0.3 * kI, cplx(0.2, -0.6), cplx(0.4, 0.4), cplx(-0.2, -0.6), 0.5 * kI, -0.1 * kI, cplx(-0.4, 0.4), -0.1 * kI, 0.0;
  return m;
}
const cplx kCurvature3(0.0, 0.43509896822552726);
const cplx kCurvingHigh3(0.0, -0.1626882746513338);
const cplx kCurvingLow3(0.0, 0.27241069357419347);
}  // namespace

TEST_CASE("wedge_trace_eval conventions") {
  const Mat m = Mat::Random(3, 3);
  const Mat n = Mat::Random(3, 3);
  const Mat x = Mat::Random(3, 3);
  const Mat y = Mat::Random(3, 3);
  const Mat z = Mat::Random(3, 3);
  const Mat id = Mat::Identity(3, 3);
  const Mat c1[] = {m, id};
  const Mat s1[] = {x};
  CHECK(dist(wedge_trace_eval(c1, s1), (m * x).trace()) < 1e-13);
  const Mat c2m[] = {m, n, id};
  const Mat s2[] = {x, y};
  CHECK(dist(wedge_trace_eval(c2m, s2), (m * x * n * y).trace() - (m * y * n * x).trace()) < 1e-13);
  const Mat c3[] = {id, id, id, id};
  const Mat s3[] = {x, y, z};
  const cplx brute = (x * y * z).trace() - (x * z * y).trace() - (y * x * z).trace() + (y * z * x).trace() +
                     (z * x * y).trace() - (z * y * x).trace();
  CHECK(dist(wedge_trace_eval(c3, s3), brute) < 1e-12);
  CHECK(error_kind([&] { wedge_trace_eval(c3, s2); }) == ErrorKind::SlotMismatch);
}

TEST_CASE("mc_form") {
  Rng r(42);
  const auto g = random_unitary(3, r);
  const Mat a = random_skew_hermitian(3, r);
  const TangentVector x(g, a);
  CHECK(dist(mc_form(g, x), a) < 1e-14);
  const auto id = UnitaryMatrix::identity(3);
  const TangentVector xi(id, a);
  CHECK(dist(mc_form(id, xi), xi.ambient()) < 1e-15);
  const Mat t = mc_form(g, x);
  CHECK((t + t.adjoint()).norm() < 1e-14);
  CHECK(error_kind([&] { mc_form(id, x); }) == ErrorKind::BaseMismatch);
}

TEST_CASE("curvature on the fixed 2x2 example") {
  const auto spec = share(spectral_decompose(diag({kI, -kI})));
  const auto ctx = classify(at(3 * kPi / 4), at(kPi / 4), spec);
  const TangentVector x(spec->matrix(), a2());
  const TangentVector y(spec->matrix(), b2());
  const cplx expected(0.0, -0.5);
  CHECK(dist(curvature_via_projectors(ctx, x, y), expected) < 1e-14);
  CHECK(dist(curvature_via_contour(ctx, x, y, Method::Residue), expected) < 1e-14);
  CHECK(dist(curvature_via_contour(ctx, x, y, Method::Quadrature), expected) < 1e-12);
  CHECK(dist(projector_inserted_curvature(ctx, x, y, Method::Residue), expected) < 1e-14);
  CHECK(dist(projector_inserted_curvature(ctx, x, y, Method::Quadrature), expected) < 1e-12);

  const TangentVector t1(spec->matrix(), mat2(0.2 * kI, 0.0, 0.0, -0.7 * kI));
  const TangentVector t2(spec->matrix(), mat2(-1.1 * kI, 0.0, 0.0, 0.4 * kI));
  CHECK(std::abs(curvature_via_projectors(ctx, t1, t2)) < 1e-15);
  CHECK(std::abs(curvature_via_contour(ctx, t1, t2, Method::Quadrature)) < 1e-13);
  CHECK(std::abs(projector_inserted_curvature(ctx, t1, t2)) < 1e-15);

  const auto null = classify(at(kPi / 8), at(kPi / 4), spec);
  CHECK(curvature_via_projectors(null, x, y) == cplx(0.0));
  CHECK(curvature_via_contour(null, x, y) == cplx(0.0));
  const auto neg = ctx.swapped();
  CHECK(dist(curvature_via_contour(neg, x, y), -expected) < 1e-14);
}

TEST_CASE("curvature and curving on the fixed 3x3 example") {
  const auto spec = share(spectral_decompose(g3()));
  const TangentVector x(spec->matrix(), a3());
  const TangentVector y(spec->matrix(), b3());
  const auto ctx = classify(at(3.0), at(1.0), spec);
  for (const cplx v : {curvature_via_projectors(ctx, x, y), curvature_via_contour(ctx, x, y, Method::Residue),
                       curvature_via_contour(ctx, x, y, Method::Quadrature),
                       projector_inserted_curvature(ctx, x, y, Method::Residue),
                       projector_inserted_curvature(ctx, x, y, Method::Quadrature)}) {
    CHECK(dist(v, kCurvature3) < 1e-12);
  }
  for (const Method m : {Method::Residue, Method::Quadrature}) {
    CHECK(dist(curving_eval(at(3.0), *spec, x, y, m), kCurvingHigh3) < 1e-12);
    CHECK(dist(curving_eval(at(1.0), *spec, x, y, m), kCurvingLow3) < 1e-12);
  }
  const auto f = curving_form();
  CHECK(dist(delta_pairs(f, at(3.0), at(1.0), *spec, x, y), kCurvature3) < 1e-12);
  CHECK(dist(delta_pairs(f, at(1.0), at(3.0), *spec, x, y), -kCurvature3) < 1e-12);
  CHECK(delta_pairs(f, at(3.0), at(3.0), *spec, x, y) == cplx(0.0));
}

TEST_CASE("curving on the fixed 2x2 example") {
  const auto spec = spectral_decompose(diag({kI, -kI}));
  const TangentVector x(spec.matrix(), c2());
  const TangentVector y(spec.matrix(), d2());
  for (const Method m : {Method::Residue, Method::Quadrature}) {
    CHECK(dist(curving_eval(CutPoint(-1.0), spec, x, y, m), cplx(0.0, -0.195)) < 1e-12);
    CHECK(dist(curving_eval(at(0.5), spec, x, y, m), cplx(0.0, 0.195)) < 1e-12);
  }
  // Null pair: both cuts in the gap between -i and 1.
  const auto f = curving_form();
  CHECK(std::abs(delta_pairs(f, at(5.0), at(5.5), spec, x, y)) < 1e-12);
  const TangentVector t(spec.matrix(), mat2(0.2 * kI, 0.0, 0.0, -0.7 * kI));
  CHECK(std::abs(curving_eval(CutPoint(-1.0), spec, t, y)) < 1e-15);
  CHECK(std::abs(curving_eval(CutPoint(-1.0), spec, t, y, Method::Quadrature)) < 1e-13);
}

TEST_CASE("curving vanishes in one dimension") {
  const auto spec = spectral_decompose(diag({std::polar(1.0, 2.0)}));
  Mat a(1, 1);
  a << 0.7 * kI;
  Mat b(1, 1);
  b << -0.2 * kI;
  const TangentVector x(spec.matrix(), a);
  const TangentVector y(spec.matrix(), b);
  CHECK(std::abs(curving_eval(at(4.0), spec, x, y)) < 1e-15);
  CHECK(std::abs(curving_eval(at(4.0), spec, x, y, Method::Quadrature)) < 1e-13);
}

TEST_CASE("basic three-form") {
  const auto id = UnitaryMatrix::identity(2);
  const TangentVector x(id, mat2(0.0, kI, kI, 0.0));
  const TangentVector y(id, mat2(0.0, 1.0, -1.0, 0.0));
  const TangentVector z(id, mat2(kI, 0.0, 0.0, -kI));
  CHECK(dist(basic_three_form(id, x, y, z), -1.0 / (2.0 * kPi * kPi)) < 1e-15);
  CHECK(dist(omega_three_form(id, x, y, z), cplx(0.0, -1.0 / kPi)) < 1e-15);
  CHECK(std::abs(basic_three_form(id, x, x, z)) < 1e-15);

  const auto one = UnitaryMatrix::diagonal(std::vector<cplx>{kI});
  Mat a(1, 1);
  a << 0.3 * kI;
  const TangentVector s(one, a);
  CHECK(std::abs(basic_three_form(one, s, s, s)) == 0.0);
}

TEST_CASE("exterior derivative of the curving") {
  const TwoFormOnY zero = [](const CutPoint&, const SpectralDecomposition&, const TangentVector&, const TangentVector&) {
    return cplx(0.0);
  };
  Rng r(43);
  int done = 0;
  while (done < 10) {
    const auto spec = spectral_decompose(random_unitary(3, r));
    if (spec.min_gap() < 0.1) continue;
    std::vector<double> ang;
    for (const auto& e : spec.spaces()) ang.push_back(angle_of(e.eigenvalue));
    const CutPoint z = at(0.5 * (ang[0] + ang[1]));
    const TangentVector x = tangent_random(spec.matrix(), r);
    const TangentVector y = tangent_random(spec.matrix(), r);
    const TangentVector w = tangent_random(spec.matrix(), r);
    const auto d0 = exterior_derivative_fd(zero, z, spec, x, y, w);
    CHECK(std::abs(d0.value) == 0.0);
    const auto d = exterior_derivative_fd(curving_form(), z, spec, x, y, w);
    CHECK(std::abs(d.value - omega_three_form(spec.matrix(), x, y, w)) < 1e-4);
    CHECK(std::abs(d.z_derivative) < 1e-6);
    ++done;
  }
}

TEST_CASE("connection one-form") {
  const auto spec = share(spectral_decompose(g3()));
  const auto ctx = classify(at(3.0), at(1.0), spec);
  const Mat ref = arc_basis(ctx).basis;
  Mat torus = Mat::Zero(3, 3);
  for (std::size_t i = 0; i < spec->size(); ++i) torus += kI * double(i + 1) * spec->projector(i);
  const auto curve = frame_along_curve(ctx, torus, ref);
  CHECK(std::abs(connection_one_form(curve)) < 1e-10);

  const TangentVector x(spec->matrix(), a3());
  const TangentVector y(spec->matrix(), b3());
  CHECK(std::abs(connection_curvature_fd(ctx, x, y) - kCurvature3) < 1e-4);
}
