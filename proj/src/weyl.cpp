#include "bgerbe/weyl.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

#include "bgerbe/error.hpp"
#include "bgerbe/forms.hpp"

namespace bgerbe {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
constexpr double kFamilyTol = 1e-10;

void require_tangents(const FlagTorusPoint& pt, std::initializer_list<const FlagTangent*> ts) {
  for (const auto* t : ts) validate_tangent(pt, *t);
}

}  // namespace

void validate_point(const FlagTorusPoint& pt) {
  const std::size_t m = pt.projections.size();
  if (m == 0 || pt.lambda.size() != m) fail(ErrorKind::Domain, "projections and values must pair up");
  const int n = pt.dim();
  Mat sum = Mat::Zero(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    const Mat& p = pt.projections[i];
    if (p.rows() != n || p.cols() != n) fail(ErrorKind::Dimension, "projection has the wrong shape");
    if ((p - p.adjoint()).norm() > kFamilyTol || (p * p - p).norm() > kFamilyTol) {
      fail(ErrorKind::Domain, "family member is not an orthogonal projection");
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      if ((p * pt.projections[j]).norm() > kFamilyTol) fail(ErrorKind::Domain, "projections are not orthogonal");
      if (std::abs(pt.lambda[i] - pt.lambda[j]) == 0.0) fail(ErrorKind::Domain, "values must be distinct");
    }
    if (std::abs(std::abs(pt.lambda[i]) - 1.0) > 1e-12) fail(ErrorKind::Domain, "values must have unit modulus");
    sum += p;
  }
  if ((sum - Mat::Identity(n, n)).norm() > kFamilyTol) fail(ErrorKind::Domain, "family is not complete");
}

void validate_tangent(const FlagTorusPoint& pt, const FlagTangent& t) {
  const std::size_t m = pt.projections.size();
  if (t.dlambda.size() != m || t.dP.size() != m) fail(ErrorKind::Domain, "tangent does not match the family");
  const int n = pt.dim();
  Mat sum = Mat::Zero(n, n);
  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Mat& p = pt.projections[i];
    const Mat& d = t.dP[i];
    if (d.rows() != n || d.cols() != n) fail(ErrorKind::Dimension, "projection increment has the wrong shape");
    scale = std::max(scale, d.norm());
    if ((d - p * d - d * p).norm() > kFamilyTol * scale) {
      fail(ErrorKind::Domain, "increment is not tangent to the projection");
    }
    if (std::abs((std::conj(pt.lambda[i]) * t.dlambda[i]).real()) > kFamilyTol * std::max(1.0, std::abs(t.dlambda[i]))) {
      fail(ErrorKind::Domain, "value increment is not tangent to the circle");
    }
    sum += d;
  }
  if (sum.norm() > kFamilyTol * scale) fail(ErrorKind::Domain, "projection increments must sum to zero");
}

bool is_regular(const FlagTorusPoint& pt, double min_gap) {
  for (std::size_t i = 0; i < pt.projections.size(); ++i) {
    if (std::abs(pt.projections[i].trace() - 1.0) > 1e-8) return false;
    for (std::size_t j = i + 1; j < pt.lambda.size(); ++j) {
      if (chordal_distance(pt.lambda[i], pt.lambda[j]) < min_gap) return false;
    }
  }
  return true;
}

UnitaryMatrix weyl_apply(const FlagTorusPoint& pt) {
  validate_point(pt);
  const int n = pt.dim();
  Mat g = Mat::Zero(n, n);
  for (std::size_t i = 0; i < pt.lambda.size(); ++i) g += pt.lambda[i] * pt.projections[i];
  return UnitaryMatrix(std::move(g));
}

Mat weyl_tangent_ambient(const FlagTorusPoint& pt, const FlagTangent& t) {
  validate_tangent(pt, t);
  const int n = pt.dim();
  Mat x = Mat::Zero(n, n);
  for (std::size_t j = 0; j < pt.lambda.size(); ++j) x += t.dlambda[j] * pt.projections[j] + pt.lambda[j] * t.dP[j];
  return x;
}

TangentVector weyl_tangent(const FlagTorusPoint& pt, const FlagTangent& t) {
  const UnitaryMatrix g = weyl_apply(pt);
  const Mat a = g.adjoint() * weyl_tangent_ambient(pt, t);
  // Rounding leaves a Hermitian residue far below the tangent tolerance; drop it.
  return TangentVector(g, 0.5 * (a - a.adjoint()));
}

Mat mc_pullback(const FlagTorusPoint& pt, const FlagTangent& t) {
  validate_tangent(pt, t);
  const int n = pt.dim();
  const std::size_t m = pt.lambda.size();
  Mat a = Mat::Zero(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    a += t.dlambda[i] / pt.lambda[i] * pt.projections[i];
    for (std::size_t j = 0; j < m; ++j) a += pt.lambda[j] / pt.lambda[i] * pt.projections[i] * t.dP[j];
  }
  return a;
}

std::vector<FlagTorusPoint> enumerate_preimages(const UnitaryMatrix& g) {
  const auto spec = spectral_decompose(g);
  const std::size_t m = spec.size();
  if (m != static_cast<std::size_t>(g.dim()) || spec.min_gap() < kRegularGap) {
    fail(ErrorKind::NotRegular, "element has a repeated or nearly repeated eigenvalue");
  }
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<FlagTorusPoint> out;
  do {
    FlagTorusPoint pt;
    for (auto i : perm) {
      pt.projections.push_back(spec.projector(i));
      pt.lambda.push_back(spec.eigenvalue(i));
    }
    out.push_back(std::move(pt));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

int preimage_count(const UnitaryMatrix& g) {
  int count = 0;
  for (const auto& pt : enumerate_preimages(g)) {
    if ((weyl_apply(pt).matrix() - g.matrix()).norm() <= 1e-10) ++count;
  }
  return count;
}

FlagTorusPoint sample_regular(int n, Rng& rng, double min_gap) {
  const UnitaryMatrix u = random_unitary(n, rng);
  FlagTorusPoint pt;
  for (int i = 0; i < n; ++i) pt.projections.push_back(u.matrix().col(i) * u.matrix().col(i).adjoint());
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    pt.lambda.clear();
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const cplx l = std::polar(1.0, angle(rng));
      if (chordal_distance(l, 1.0) < min_gap) ok = false;
      for (const auto& prev : pt.lambda) {
        if (chordal_distance(prev, l) < min_gap) ok = false;
      }
      pt.lambda.push_back(l);
    }
    if (ok) return pt;
  }
  fail(ErrorKind::NotRegular, "could not sample a regular point with the requested gap");
}

FlagTangent random_flag_tangent(const FlagTorusPoint& pt, Rng& rng) {
  const Mat k = random_skew_hermitian(pt.dim(), rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  FlagTangent t;
  for (std::size_t i = 0; i < pt.lambda.size(); ++i) {
    t.dlambda.push_back(kI * pt.lambda[i] * normal(rng));
    t.dP.push_back(k * pt.projections[i] - pt.projections[i] * k);
  }
  return t;
}

cplx pullback_curving_closed(const FlagTorusPoint& pt, const CutPoint& z, const FlagTangent& t1,
                             const FlagTangent& t2) {
  validate_point(pt);
  require_tangents(pt, {&t1, &t2});
  const std::size_t m = pt.lambda.size();
  const FlagTangent* ts[] = {&t1, &t2};
  cplx total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      if (i == k) continue;
      const cplx li = pt.lambda[i];
      const cplx lk = pt.lambda[k];
      const cplx coeff = log_cut(z, li) - log_cut(z, lk) + (lk - li) / lk;
      const cplx form = antisymmetrize(2, [&](std::span<const int> s) {
        return (pt.projections[i] * ts[s[0]]->dP[k] * ts[s[1]]->dP[k]).trace();
      });
      total += coeff * form;
    }
  }
  return kI / (4.0 * kPi) * total;
}

namespace {

cplx simplified_three_form(const FlagTorusPoint& pt, const FlagTangent& t1, const FlagTangent& t2,
                           const FlagTangent& t3) {
  const std::size_t m = pt.lambda.size();
  const FlagTangent* ts[] = {&t1, &t2, &t3};
  cplx total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      if (i == k) continue;
      const cplx li = pt.lambda[i];
      const cplx lk = pt.lambda[k];
      const cplx first = antisymmetrize(3, [&](std::span<const int> s) {
        const cplx dli = ts[s[0]]->dlambda[i];
        const cplx dlk = ts[s[0]]->dlambda[k];
        const cplx scalar = dli / li - dlk / lk - dli / lk + li * dlk / (lk * lk);
        return scalar * (pt.projections[i] * ts[s[1]]->dP[k] * ts[s[2]]->dP[k]).trace();
      });
      const cplx second = antisymmetrize(3, [&](std::span<const int> s) {
        return (ts[s[0]]->dP[i] * ts[s[1]]->dP[k] * ts[s[2]]->dP[k]).trace();
      });
      total += first - li / lk * second;
    }
  }
  return kI / (4.0 * kPi) * total;
}

}  // namespace

cplx pullback_df_closed(const FlagTorusPoint& pt, const CutPoint& z, const FlagTangent& t1, const FlagTangent& t2,
                        const FlagTangent& t3) {
  validate_point(pt);
  require_tangents(pt, {&t1, &t2, &t3});
  for (const auto& l : pt.lambda) {
    if (chordal_distance(l, z.value()) < kCutExclusion) fail(ErrorKind::IllConditionedCut, "cut hits a torus value");
  }
  return simplified_three_form(pt, t1, t2, t3);
}

PulledBackThreeForm pullback_nu_closed(const FlagTorusPoint& pt, const FlagTangent& t1, const FlagTangent& t2,
                                       const FlagTangent& t3) {
  validate_point(pt);
  require_tangents(pt, {&t1, &t2, &t3});
  const std::size_t m = pt.lambda.size();
  const int n = pt.dim();
  const FlagTangent* ts[] = {&t1, &t2, &t3};
  // Torus part a = sum lambda_i^{-1} dlambda_i P_i and flag part b = sum lambda_i^{-1} lambda_j P_i dP_j.
  Mat a[3];
  Mat b[3];
  for (int s = 0; s < 3; ++s) {
    a[s] = Mat::Zero(n, n);
    b[s] = Mat::Zero(n, n);
    for (std::size_t i = 0; i < m; ++i) {
      a[s] += ts[s]->dlambda[i] / pt.lambda[i] * pt.projections[i];
      for (std::size_t j = 0; j < m; ++j) {
        b[s] += pt.lambda[j] / pt.lambda[i] * pt.projections[i] * ts[s]->dP[j];
      }
    }
  }
  const cplx abb = antisymmetrize(3, [&](std::span<const int> s) { return (a[s[0]] * b[s[1]] * b[s[2]]).trace(); });
  const cplx bbb = antisymmetrize(3, [&](std::span<const int> s) { return (b[s[0]] * b[s[1]] * b[s[2]]).trace(); });
  PulledBackThreeForm out;
  out.raw = -kI / (4.0 * kPi) * abb - kI / (12.0 * kPi) * bbb;
  out.simplified = simplified_three_form(pt, t1, t2, t3);
  return out;
}

}  // namespace bgerbe
