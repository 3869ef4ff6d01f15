#pragma once

// Batched spectral pair sum used by every two-form contour quadrature:
//
//   S = sum_q w_q sum_{i,j} C_ij (xi_q - lambda_i)^{-1} (xi_q - lambda_j)^{-2}
//
// Inputs are split real/imaginary arrays. C is row-major m x m.
// The scalar variant is the reference; the AVX2 variant processes four nodes
// per register and must agree with it to rounding.

#include <complex>
#include <cstddef>

namespace bgerbe::kernels {

struct PairSumInput {
  const double* xi_re;
  const double* xi_im;
  const double* w_re;
  const double* w_im;
  std::size_t nodes;
  const double* lambda_re;
  const double* lambda_im;
  std::size_t m;
  const double* c_re;
  const double* c_im;
};

enum class Backend { Scalar, Avx2 };

std::complex<double> pair_sum_scalar(const PairSumInput& in);

// Falls back to the scalar kernel when the AVX2 translation unit is not built;
// avx2_available() reports whether it is both built and supported by the CPU.
std::complex<double> pair_sum_avx2(const PairSumInput& in);
bool avx2_available();

// Chosen once per process: AVX2 when available, unless BGERBE_KERNEL=scalar.
Backend active_backend();
const char* backend_name(Backend b);
std::complex<double> pair_sum(const PairSumInput& in, Backend b);
std::complex<double> pair_sum(const PairSumInput& in);

}  // namespace bgerbe::kernels
