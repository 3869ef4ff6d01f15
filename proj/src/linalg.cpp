#include "bgerbe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bgerbe/error.hpp"

namespace bgerbe {

namespace {

void require_square(const Mat& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorKind::Dimension, std::string(what) + " must be a non-empty square matrix");
  }
}

Mat complex_gaussian(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Mat z(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = cplx(re, im);
    }
  }
  return z;
}

double skew_defect(const Mat& a) { return (a + a.adjoint()).norm(); }

}  // namespace

UnitaryDefect unitary_check(const Mat& m) {
  require_square(m, "unitary candidate");
  const auto n = m.rows();
  const double defect = (m * m.adjoint() - Mat::Identity(n, n)).norm();
  return {defect <= 1e-12 * static_cast<double>(n), defect};
}

UnitaryMatrix::UnitaryMatrix(Mat m) : m_(std::move(m)) {
  const auto check = unitary_check(m_);
  if (!check.unitary) {
    fail(ErrorKind::NotUnitary, "unitarity defect " + std::to_string(check.defect));
  }
}

UnitaryMatrix UnitaryMatrix::identity(int n) {
  if (n < 1) fail(ErrorKind::Dimension, "dimension must be positive");
  return UnitaryMatrix(Mat::Identity(n, n));
}

UnitaryMatrix UnitaryMatrix::diagonal(std::span<const cplx> entries) {
  if (entries.empty()) fail(ErrorKind::Dimension, "empty diagonal");
  const auto n = static_cast<Eigen::Index>(entries.size());
  Mat m = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return UnitaryMatrix(std::move(m));
}

TangentVector::TangentVector(UnitaryMatrix base, Mat direction)
    : base_(std::move(base)), direction_(std::move(direction)) {
  if (direction_.rows() != base_.dim() || direction_.cols() != base_.dim()) {
    fail(ErrorKind::Dimension, "tangent direction does not match base dimension");
  }
  const double defect = skew_defect(direction_);
  if (defect > 1e-12 * base_.dim()) {
    fail(ErrorKind::NotSkewHermitian, "skew defect " + std::to_string(defect));
  }
  ambient_ = base_.matrix() * direction_;
}

TangentVector TangentVector::from_ambient(const UnitaryMatrix& base, const Mat& x) {
  return TangentVector(base, base.adjoint() * x);
}

SpectralDecomposition::SpectralDecomposition(UnitaryMatrix g, std::vector<Eigenspace> spaces,
                                             double cluster_tol)
    : g_(std::move(g)), spaces_(std::move(spaces)), cluster_tol_(cluster_tol) {}

Mat SpectralDecomposition::reconstruct() const {
  Mat out = Mat::Zero(dim(), dim());
  for (const auto& s : spaces_) out += s.eigenvalue * s.projector;
  return out;
}

double SpectralDecomposition::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spaces_.size(); ++i) {
    for (std::size_t j = i + 1; j < spaces_.size(); ++j) {
      gap = std::min(gap, chordal_distance(spaces_[i].eigenvalue, spaces_[j].eigenvalue));
    }
  }
  return gap;
}

UnitaryMatrix random_unitary(int n, Rng& rng) {
  if (n < 1) fail(ErrorKind::Dimension, "dimension must be positive");
  const Mat z = complex_gaussian(n, rng);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  const Mat& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return UnitaryMatrix(std::move(q));
}

Mat random_skew_hermitian(int n, Rng& rng) {
  if (n < 1) fail(ErrorKind::Dimension, "dimension must be positive");
  const Mat m = complex_gaussian(n, rng);
  Mat a = m - m.adjoint();
  return a / a.norm();
}

TangentVector tangent_random(const UnitaryMatrix& g, Rng& rng) {
  return TangentVector(g, random_skew_hermitian(g.dim(), rng));
}

SpectralDecomposition spectral_decompose(const UnitaryMatrix& g, double cluster_tol) {
  const int n = g.dim();
  Eigen::ComplexSchur<Mat> schur(g.matrix());
  if (schur.info() != Eigen::Success) fail(ErrorKind::Evaluation, "Schur decomposition failed");
  const Mat& t = schur.matrixT();
  const Mat& u = schur.matrixU();

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::vector<cplx> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = t(i, i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return angle_of(values[static_cast<std::size_t>(a)]) < angle_of(values[static_cast<std::size_t>(b)]);
  });

  auto value_at = [&](int pos) { return values[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])]; };
  // Gap after sorted position k, wrapping around the circle.
  auto gap_after = [&](int k) { return chordal_distance(value_at(k), value_at((k + 1) % n)); };

  // Start the sweep just past a genuine gap so no cluster straddles the seam.
  int start = 0;
  bool split = false;
  if (n > 1) {
    for (int k = 0; k < n; ++k) {
      if (gap_after(k) >= cluster_tol) {
        start = (k + 1) % n;
        split = true;
        break;
      }
    }
  }

  std::vector<std::vector<int>> clusters;
  if (!split) {
    clusters.push_back({});
    for (int k = 0; k < n; ++k) clusters.back().push_back(k);
  } else {
    clusters.push_back({start});
    for (int step = 1; step < n; ++step) {
      const int prev = (start + step - 1) % n;
      const int pos = (start + step) % n;
      if (gap_after(prev) >= cluster_tol) clusters.push_back({});
      clusters.back().push_back(pos);
    }
  }

  std::vector<Eigenspace> spaces;
  spaces.reserve(clusters.size());
  for (const auto& cluster : clusters) {
    double diameter = 0.0;
    cplx mean = 0.0;
    for (int a : cluster) {
      mean += value_at(a);
      for (int b : cluster) diameter = std::max(diameter, chordal_distance(value_at(a), value_at(b)));
    }
    if (diameter >= cluster_tol) {
      fail(ErrorKind::AmbiguousClustering,
           "eigenvalue chain of spread " + std::to_string(diameter) + " exceeds cluster tolerance");
    }
    Mat vectors(n, static_cast<Eigen::Index>(cluster.size()));
    // Within a cluster keep the Schur column order.
    std::vector<int> cols;
    for (int a : cluster) cols.push_back(order[static_cast<std::size_t>(a)]);
    std::sort(cols.begin(), cols.end());
    for (std::size_t c = 0; c < cols.size(); ++c) vectors.col(static_cast<Eigen::Index>(c)) = u.col(cols[c]);
    Eigenspace space;
    space.eigenvalue = mean / std::abs(mean);
    space.basis = gram_schmidt(vectors);
    space.projector = space.basis * space.basis.adjoint();
    spaces.push_back(std::move(space));
  }
  std::stable_sort(spaces.begin(), spaces.end(), [](const Eigenspace& a, const Eigenspace& b) {
    return angle_of(a.eigenvalue) < angle_of(b.eigenvalue);
  });
  return SpectralDecomposition(g, std::move(spaces), cluster_tol);
}

UnitaryMatrix embed_block(const UnitaryMatrix& g, int big_n) {
  if (big_n < g.dim()) fail(ErrorKind::Dimension, "embedding target smaller than source");
  Mat m = Mat::Identity(big_n, big_n);
  m.topLeftCorner(g.dim(), g.dim()) = g.matrix();
  return UnitaryMatrix(std::move(m));
}

Mat embed_direction(const Mat& a, int big_n) {
  if (big_n < a.rows()) fail(ErrorKind::Dimension, "embedding target smaller than source");
  Mat m = Mat::Zero(big_n, big_n);
  m.topLeftCorner(a.rows(), a.cols()) = a;
  return m;
}

TangentVector embed_tangent(const TangentVector& x, int big_n) {
  return TangentVector(embed_block(x.base(), big_n), embed_direction(x.direction(), big_n));
}

Mat expm_skew(const Mat& a) {
  require_square(a, "exponent");
  const Mat h = cplx(0.0, 1.0) * a;
  // Symmetrise away rounding so the Hermitian solver sees an exact Hermitian input.
  const Mat hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(hs);
  const Eigen::VectorXd& w = es.eigenvalues();
  Vec phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::exp(cplx(0.0, -w(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

UnitaryMatrix flow(const UnitaryMatrix& g, const Mat& a, double t) {
  return UnitaryMatrix(g.matrix() * expm_skew(t * a));
}

Mat gram_schmidt(const Mat& m) {
  Mat q = m;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const cplx r = q.col(i).dot(q.col(j));
        q.col(j) -= r * q.col(i);
      }
    }
    const double nrm = q.col(j).norm();
    if (nrm < 1e-14) fail(ErrorKind::Dimension, "Gram-Schmidt on a rank-deficient set");
    q.col(j) /= nrm;
  }
  return q;
}

void require_base(const TangentVector& x, const UnitaryMatrix& g) {
  if (x.dim() != g.dim() || (x.base().matrix() - g.matrix()).cwiseAbs().maxCoeff() > 1e-13) {
    fail(ErrorKind::BaseMismatch, "tangent vector based at a different point");
  }
}

double chordal_distance(cplx a, cplx b) { return std::abs(a - b); }

double angle_of(cplx z) {
  double a = std::arg(z);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  if (a >= 2.0 * std::numbers::pi) a -= 2.0 * std::numbers::pi;
  return a;
}

}  // namespace bgerbe
