#include "bgerbe/linalg.hpp"
#include "test_util.hpp"

using namespace bgerbe;
using namespace testing;

TEST_CASE("unitary_check on small fixed matrices") {
  const auto id = unitary_check(Mat::Identity(3, 3));
  CHECK(id.unitary);
  CHECK(id.defect == 0.0);
  CHECK(unitary_check(mat2(kI, 0.0, 0.0, -kI)).unitary);
  CHECK_FALSE(unitary_check(mat2(2.0, 0.0, 0.0, 1.0)).unitary);
  CHECK(error_kind([] { unitary_check(Mat::Zero(2, 3)); }) == ErrorKind::Dimension);
  CHECK(error_kind([] { UnitaryMatrix(mat2(2.0, 0.0, 0.0, 1.0)); }) == ErrorKind::NotUnitary);
}

TEST_CASE("random_unitary") {
  Rng rng(3);
  const auto one = random_unitary(1, rng);
  CHECK(std::abs(std::abs(one.matrix()(0, 0)) - 1.0) < 1e-14);
  CHECK(error_kind([&] { random_unitary(0, rng); }) == ErrorKind::Dimension);

  Rng a(7);
  Rng b(7);
  CHECK(random_unitary(4, a).matrix() == random_unitary(4, b).matrix());

  Rng r(5);
  for (int s = 0; s < 1000; ++s) {
    const auto g = random_unitary(4, r);
    REQUIRE(unitary_check(g.matrix()).unitary);
    Eigen::ComplexEigenSolver<Mat> es(g.matrix());
    for (Eigen::Index i = 0; i < 4; ++i) REQUIRE(std::abs(std::abs(es.eigenvalues()(i)) - 1.0) < 1e-12);
  }
}

TEST_CASE("random_skew_hermitian is skew and centred") {
  Rng r(9);
  Mat mean = Mat::Zero(3, 3);
  for (int s = 0; s < 100; ++s) {
    const Mat a = random_skew_hermitian(3, r);
    REQUIRE((a + a.adjoint()).norm() < 1e-15);
    REQUIRE(std::abs(a.norm() - 1.0) < 1e-14);
    mean += a;
  }
  mean /= 100.0;
  // Entries have standard deviation below 1/sqrt(n^2) for unit Frobenius norm.
  CHECK(mean.cwiseAbs().maxCoeff() < 3.0 / std::sqrt(100.0));
  Rng x(1);
  Rng y(1);
  CHECK(random_skew_hermitian(4, x) == random_skew_hermitian(4, y));
}

TEST_CASE("spectral_decompose basic cases") {
  const auto s1 = spectral_decompose(UnitaryMatrix::identity(2));
  REQUIRE(s1.size() == 1);
  CHECK(dist(s1.eigenvalue(0), 1.0) < 1e-15);
  CHECK(s1.multiplicity(0) == 2);
  CHECK(dist(s1.projector(0), Mat::Identity(2, 2)) < 1e-14);

  const auto s2 = spectral_decompose(diag({kI, -kI}));
  REQUIRE(s2.size() == 2);
  CHECK(dist(s2.eigenvalue(0), kI) < 1e-15);
  CHECK(dist(s2.projector(0), mat2(1.0, 0.0, 0.0, 0.0)) < 1e-14);
  CHECK(dist(s2.eigenvalue(1), -kI) < 1e-15);
  CHECK(dist(s2.projector(1), mat2(0.0, 0.0, 0.0, 1.0)) < 1e-14);

  Rng r(11);
  const auto s3 = spectral_decompose(random_unitary(5, r));
  CHECK((s3.reconstruct() - s3.matrix().matrix()).norm() < 1e-10);
}

TEST_CASE("spectral_decompose clusters repeated eigenvalues") {
  Rng r(2);
  const Mat u = random_unitary(4, r).matrix();
  Vec d(4);
  d << kI, kI, -1.0, -1.0;
  const auto s = spectral_decompose(UnitaryMatrix(u * d.asDiagonal() * u.adjoint()));
  REQUIRE(s.size() == 2);
  CHECK(s.multiplicity(0) == 2);
  CHECK(s.multiplicity(1) == 2);
  CHECK((s.projector(0) * s.projector(0) - s.projector(0)).norm() < 1e-12);
  CHECK((s.projector(0) * s.projector(1)).norm() < 1e-12);
  CHECK((s.reconstruct() - s.matrix().matrix()).norm() < 1e-12);
}

TEST_CASE("spectral_decompose rejects chained clusters") {
  const double step = 0.8e-9;
  const auto g = diag({std::polar(1.0, 1.0), std::polar(1.0, 1.0 + step), std::polar(1.0, 1.0 + 2 * step)});
  CHECK(error_kind([&] { spectral_decompose(g); }) == ErrorKind::AmbiguousClustering);
}

TEST_CASE("embed_block") {
  const auto g = embed_block(diag({kI}), 3);
  Mat expected = Mat::Identity(3, 3);
  expected(0, 0) = kI;
  CHECK(g.matrix() == expected);
  Rng r(4);
  const auto h = random_unitary(3, r);
  CHECK(embed_block(h, 3).matrix() == h.matrix());
  CHECK(error_kind([&] { embed_block(h, 2); }) == ErrorKind::Dimension);

  // Non-unit eigenvalues carry over with zero-padded projectors.
  const auto s = spectral_decompose(h);
  const auto es = spectral_decompose(embed_block(h, 5));
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < es.size(); ++j) {
      if (std::abs(es.eigenvalue(j) - s.eigenvalue(i)) < 1e-12) {
        Mat padded = Mat::Zero(5, 5);
        padded.topLeftCorner(3, 3) = s.projector(i);
        CHECK((es.projector(j) - padded).norm() < 1e-10);
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("tangent vectors") {
  Rng r(6);
  const auto g = random_unitary(3, r);
  const Mat a = random_skew_hermitian(3, r);
  const TangentVector x(g, a);
  CHECK((x.ambient() - g.matrix() * a).norm() < 1e-15);
  CHECK((TangentVector::from_ambient(g, x.ambient()).direction() - a).norm() < 1e-14);
  CHECK(error_kind([&] { TangentVector(g, Mat::Identity(3, 3)); }) == ErrorKind::NotSkewHermitian);
  const auto other = random_unitary(3, r);
  CHECK(error_kind([&] { require_base(x, other); }) == ErrorKind::BaseMismatch);
}

TEST_CASE("expm_skew matches the power series") {
  Rng r(8);
  const Mat a = 0.7 * random_skew_hermitian(4, r);
  Mat series = Mat::Identity(4, 4);
  Mat term = Mat::Identity(4, 4);
  for (int k = 1; k < 30; ++k) {
    term = term * a / double(k);
    series += term;
  }
  CHECK((expm_skew(a) - series).norm() < 1e-13);
}

TEST_CASE("gram_schmidt gives orthonormal columns spanning the input") {
  Rng r(10);
  Mat m = Mat::Random(5, 3);
  const Mat q = gram_schmidt(m);
  CHECK((q.adjoint() * q - Mat::Identity(3, 3)).norm() < 1e-14);
  CHECK((q * (q.adjoint() * m) - m).norm() < 1e-13);
}

TEST_CASE("angle helpers") {
  CHECK(angle_of(-1.0) == doctest::Approx(std::numbers::pi));
  CHECK(angle_of(-kI) == doctest::Approx(1.5 * std::numbers::pi));
  CHECK(angle_of(1.0) == 0.0);
  CHECK(chordal_distance(1.0, -1.0) == doctest::Approx(2.0));
}
