#include "bgerbe/forms.hpp"
#include "bgerbe/weyl.hpp"
#include "test_util.hpp"

using namespace bgerbe;
using namespace testing;

namespace {
const double kPi = std::numbers::pi;

FlagTorusPoint coordinate_point(std::vector<cplx> lambda) {
  FlagTorusPoint pt;
  const int n = static_cast<int>(lambda.size());
  for (int i = 0; i < n; ++i) {
    Mat p = Mat::Zero(n, n);
    p(i, i) = 1.0;
    pt.projections.push_back(p);
  }
  pt.lambda = std::move(lambda);
  return pt;
}

FlagTangent torus_only(const FlagTangent& t) {
  FlagTangent out = t;
  for (auto& d : out.dP) d.setZero();
  return out;
}

CutPoint cut_between_first_two(const FlagTorusPoint& pt) {
  std::vector<double> a;
  for (const auto& l : pt.lambda) a.push_back(angle_of(l));
  std::sort(a.begin(), a.end());
  return CutPoint::from_angle(a.size() > 1 ? 0.5 * (a[0] + a[1]) : 0.5 * (a[0] + 2 * kPi));
}
}  // namespace

TEST_CASE("weyl_apply") {
  const std::vector<cplx> l = {kI, std::polar(1.0, 2.5), -1.0};
  const auto t = coordinate_point(l);
  CHECK(dist(weyl_apply(t).matrix(), diag({kI, std::polar(1.0, 2.5), -1.0}).matrix()) < 1e-15);
  Rng r(51);
  const auto k = random_unitary(3, r);
  auto moved = t;
  for (auto& p : moved.projections) p = k.matrix() * p * k.adjoint();
  CHECK(dist(weyl_apply(moved).matrix(), k.matrix() * weyl_apply(t).matrix() * k.adjoint()) < 1e-14);
  for (int s = 0; s < 100; ++s) REQUIRE(unitary_check(weyl_apply(sample_regular(4, r)).matrix()).unitary);

  auto bad = t;
  bad.projections[0](0, 1) = 0.1;
  CHECK(error_kind([&] { weyl_apply(bad); }) == ErrorKind::Domain);
}

TEST_CASE("weyl tangents") {
  const auto t = coordinate_point({kI, -1.0});
  FlagTangent torus;
  const double eps = 0.3;
  for (const auto& l : t.lambda) torus.dlambda.push_back(kI * l * eps);
  torus.dP = {Mat::Zero(2, 2), Mat::Zero(2, 2)};
  const Mat x = weyl_tangent_ambient(t, torus);
  const Mat g = weyl_apply(t).matrix();
  CHECK(dist(x, g * (kI * eps * Mat::Identity(2, 2))) < 1e-15);
  CHECK((x * g - g * x).norm() < 1e-15);

  FlagTangent rot;
  rot.dlambda = {0.0, 0.0};
  const Mat inc = mat2(0.0, cplx(0.3, 0.4), cplx(0.3, -0.4), 0.0);
  rot.dP = {inc, -inc};
  const Mat y = weyl_tangent_ambient(t, rot);
  CHECK(std::abs(y(0, 0)) < 1e-15);
  CHECK(std::abs(y(1, 1)) < 1e-15);
  CHECK(std::abs(y(0, 1)) > 0.1);

  CHECK(dist(mc_pullback(t, rot), weyl_tangent(t, rot).direction()) < 1e-14);
}

TEST_CASE("tangent map matches finite differences") {
  Rng r(52);
  const auto pt = sample_regular(3, r);
  const Mat k = random_skew_hermitian(3, r);
  const std::vector<double> th = {0.4, -1.2, 0.9};
  auto at = [&](double s) {
    FlagTorusPoint q;
    const Mat e = expm_skew(s * k);
    for (int i = 0; i < 3; ++i) {
      q.projections.push_back(e * pt.projections[static_cast<std::size_t>(i)] * e.adjoint());
      q.lambda.push_back(pt.lambda[static_cast<std::size_t>(i)] * std::polar(1.0, s * th[static_cast<std::size_t>(i)]));
    }
    return q;
  };
  FlagTangent v;
  for (int i = 0; i < 3; ++i) {
    const Mat& p = pt.projections[static_cast<std::size_t>(i)];
    v.dlambda.push_back(kI * th[static_cast<std::size_t>(i)] * pt.lambda[static_cast<std::size_t>(i)]);
    v.dP.push_back(k * p - p * k);
  }
  const double h = 1e-5;
  const Mat fd = (weyl_apply(at(h)).matrix() - weyl_apply(at(-h)).matrix()) / (2 * h);
  CHECK((fd - weyl_tangent_ambient(pt, v)).norm() < 1e-6);
}

TEST_CASE("preimage counts") {
  Rng r(53);
  for (int n = 1; n <= 4; ++n) {
    const auto pt = sample_regular(n, r);
    int f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    CHECK(preimage_count(weyl_apply(pt)) == f);
  }
  const auto pt = sample_regular(3, r);
  for (const auto& q : enumerate_preimages(weyl_apply(pt))) {
    CHECK(dist(weyl_apply(q).matrix(), weyl_apply(pt).matrix()) < 1e-10);
  }
  CHECK(error_kind([] { preimage_count(UnitaryMatrix::identity(2)); }) == ErrorKind::NotRegular);
}

TEST_CASE("sample_regular") {
  Rng a(54);
  Rng b(54);
  const auto p = sample_regular(2, a);
  const auto q = sample_regular(2, b);
  CHECK(is_regular(p, 1e-3));
  CHECK(p.lambda == q.lambda);
  // Haar samples are regular at gap 1e-3 far more often than not.
  Rng r(55);
  for (int n = 2; n <= 6; ++n) {
    int ok = 0;
    for (int s = 0; s < 200; ++s) {
      const auto spec = spectral_decompose(random_unitary(n, r));
      if (static_cast<int>(spec.size()) == n && spec.min_gap() >= 1e-3) ++ok;
    }
    CHECK(ok > 100);
  }
}

TEST_CASE("closed pulled-back forms") {
  Rng r(56);
  for (int n = 1; n <= 5; ++n) {
    const auto pt = sample_regular(n, r);
    const auto t1 = random_flag_tangent(pt, r);
    const auto t2 = random_flag_tangent(pt, r);
    const auto t3 = random_flag_tangent(pt, r);
    const CutPoint z = cut_between_first_two(pt);
    const auto spec = spectral_decompose(weyl_apply(pt));
    const TangentVector x1 = weyl_tangent(pt, t1);
    const TangentVector x2 = weyl_tangent(pt, t2);
    const TangentVector x3 = weyl_tangent(pt, t3);

    CHECK(std::abs(pullback_curving_closed(pt, z, torus_only(t1), torus_only(t2))) < 1e-14);
    CHECK(std::abs(pullback_df_closed(pt, z, torus_only(t1), torus_only(t2), torus_only(t3))) < 1e-14);
    const auto flat = pullback_nu_closed(pt, torus_only(t1), torus_only(t2), torus_only(t3));
    CHECK(std::abs(flat.raw) < 1e-13);
    CHECK(std::abs(flat.simplified) < 1e-13);

    CHECK(std::abs(pullback_curving_closed(pt, z, t1, t2) - curving_eval(z, spec, x1, x2)) < 1e-8);
    const auto nu = pullback_nu_closed(pt, t1, t2, t3);
    const cplx omega = omega_three_form(weyl_apply(pt), x1, x2, x3);
    CHECK(std::abs(nu.raw - nu.simplified) < 1e-9);
    CHECK(std::abs(nu.simplified - omega) < 1e-8);
    const cplx df = pullback_df_closed(pt, z, t1, t2, t3);
    CHECK(std::abs(df - nu.simplified) < 1e-9);
    if (n == 1) {
      CHECK(std::abs(pullback_curving_closed(pt, z, t1, t2)) == 0.0);
      CHECK(std::abs(nu.simplified) < 1e-15);
    }
  }
}

TEST_CASE("closed df is independent of the cut and matches finite differences") {
  Rng r(57);
  const auto pt = sample_regular(4, r, 0.1);
  const auto t1 = random_flag_tangent(pt, r);
  const auto t2 = random_flag_tangent(pt, r);
  const auto t3 = random_flag_tangent(pt, r);
  std::vector<double> a;
  for (const auto& l : pt.lambda) a.push_back(angle_of(l));
  std::sort(a.begin(), a.end());
  a.insert(a.begin(), 0.0);
  a.push_back(2 * kPi);
  const cplx ref = pullback_df_closed(pt, CutPoint::from_angle(0.5 * (a[1] + a[2])), t1, t2, t3);
  double spread = 0.0;
  std::uniform_real_distribution<double> u(0.25, 0.75);
  for (int s = 0; s < 10; ++s) {
    const std::size_t g = static_cast<std::size_t>(s) % (a.size() - 1);
    const CutPoint z = CutPoint::from_angle(a[g] + u(r) * (a[g + 1] - a[g]));
    spread = std::max(spread, std::abs(pullback_df_closed(pt, z, t1, t2, t3) - ref));
  }
  CHECK(spread <= 1e-12);

  const auto spec = spectral_decompose(weyl_apply(pt));
  const CutPoint z = CutPoint::from_angle(0.5 * (a[2] + a[3]));
  const auto d = exterior_derivative_fd(curving_form(), z, spec, weyl_tangent(pt, t1), weyl_tangent(pt, t2),
                                        weyl_tangent(pt, t3));
  CHECK(std::abs(d.value - ref) < 1e-4);
}
