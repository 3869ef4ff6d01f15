#pragma once

// Dense complex linear algebra for finite-dimensional unitary groups U(n):
// validated group elements, tangent vectors in left-trivialised form, Haar
// sampling and spectral resolutions g = sum_i lambda_i P_i with eigenvalue
// clustering.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bgerbe {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline constexpr double kDefaultClusterTol = 1e-9;

struct UnitaryDefect {
  bool unitary = false;
  double defect = 0.0;  // ||m m^dagger - I||_F
};

// True iff ||m m^dagger - I||_F <= 1e-12 * n. Throws Dimension for non-square m.
UnitaryDefect unitary_check(const Mat& m);

class UnitaryMatrix {
 public:
  // Throws NotUnitary (or Dimension) if m fails unitary_check.
  explicit UnitaryMatrix(Mat m);

  static UnitaryMatrix identity(int n);
  static UnitaryMatrix diagonal(std::span<const cplx> entries);

  const Mat& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  Mat adjoint() const { return m_.adjoint(); }

 private:
  Mat m_;
};

// A tangent vector X = g A at g, stored as the pair (g, A) with A
// skew-Hermitian. ambient() is the representative X in the matrix space.
class TangentVector {
 public:
  TangentVector(UnitaryMatrix base, Mat direction);

  static TangentVector from_ambient(const UnitaryMatrix& base, const Mat& x);

  const UnitaryMatrix& base() const noexcept { return base_; }
  const Mat& direction() const noexcept { return direction_; }
  const Mat& ambient() const noexcept { return ambient_; }
  int dim() const noexcept { return base_.dim(); }

 private:
  UnitaryMatrix base_;
  Mat direction_;
  Mat ambient_;
};

// One distinct eigenvalue cluster: the representative eigenvalue on U(1), an
// orthonormal basis of its eigenspace and the orthogonal projector onto it.
struct Eigenspace {
  cplx eigenvalue;
  Mat basis;
  Mat projector;

  int multiplicity() const noexcept { return static_cast<int>(basis.cols()); }
};

// Clusters are ordered by angle in [0, 2pi). Instances are immutable.
class SpectralDecomposition {
 public:
  SpectralDecomposition(UnitaryMatrix g, std::vector<Eigenspace> spaces, double cluster_tol);

  const UnitaryMatrix& matrix() const noexcept { return g_; }
  int dim() const noexcept { return g_.dim(); }
  std::size_t size() const noexcept { return spaces_.size(); }
  double cluster_tol() const noexcept { return cluster_tol_; }

  const Eigenspace& operator[](std::size_t i) const { return spaces_[i]; }
  std::span<const Eigenspace> spaces() const noexcept { return spaces_; }
  cplx eigenvalue(std::size_t i) const { return spaces_[i].eigenvalue; }
  const Mat& projector(std::size_t i) const { return spaces_[i].projector; }
  int multiplicity(std::size_t i) const { return spaces_[i].multiplicity(); }

  Mat reconstruct() const;
  // Smallest chordal distance between distinct clusters (infinity when only one).
  double min_gap() const;

 private:
  UnitaryMatrix g_;
  std::vector<Eigenspace> spaces_;
  double cluster_tol_;
};

// Haar-distributed unitary: QR of a complex Gaussian with the R-diagonal phase fix.
UnitaryMatrix random_unitary(int n, Rng& rng);

// Skew-Hermitian matrix with unit Frobenius norm from a complex Gaussian.
Mat random_skew_hermitian(int n, Rng& rng);
TangentVector tangent_random(const UnitaryMatrix& g, Rng& rng);

// Throws AmbiguousClustering when the spectrum has a chain of eigenvalues that
// are pairwise-adjacent within cluster_tol but spread wider than cluster_tol.
SpectralDecomposition spectral_decompose(const UnitaryMatrix& g,
                                         double cluster_tol = kDefaultClusterTol);

// g -> diag(g, I_{N-n}); directions embed as diag(A, 0).
UnitaryMatrix embed_block(const UnitaryMatrix& g, int big_n);
Mat embed_direction(const Mat& a, int big_n);
TangentVector embed_tangent(const TangentVector& x, int big_n);

// exp(A) for skew-Hermitian A, through the Hermitian eigensolver of iA.
Mat expm_skew(const Mat& a);
// g exp(t A).
UnitaryMatrix flow(const UnitaryMatrix& g, const Mat& a, double t);

// Modified Gram-Schmidt on the columns of m (must have full column rank).
Mat gram_schmidt(const Mat& m);

// Throws BaseMismatch unless x is based at g (entrywise to 1e-13).
void require_base(const TangentVector& x, const UnitaryMatrix& g);

double chordal_distance(cplx a, cplx b);
// Angle of z in [0, 2pi).
double angle_of(cplx z);

}  // namespace bgerbe
