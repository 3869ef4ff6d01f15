#include <vector>

#include "bgerbe/kernels.hpp"

namespace bgerbe::kernels {

std::complex<double> pair_sum_scalar(const PairSumInput& in) {
  using cplx = std::complex<double>;
  std::vector<cplx> u(in.m);
  std::vector<cplx> v(in.m);
  cplx total = 0.0;
  for (std::size_t q = 0; q < in.nodes; ++q) {
    const cplx xi(in.xi_re[q], in.xi_im[q]);
    for (std::size_t i = 0; i < in.m; ++i) {
      u[i] = 1.0 / (xi - cplx(in.lambda_re[i], in.lambda_im[i]));
      v[i] = u[i] * u[i];
    }
    cplx node = 0.0;
    for (std::size_t i = 0; i < in.m; ++i) {
      cplx row = 0.0;
      for (std::size_t j = 0; j < in.m; ++j) {
        row += cplx(in.c_re[i * in.m + j], in.c_im[i * in.m + j]) * v[j];
      }
      node += u[i] * row;
    }
    total += cplx(in.w_re[q], in.w_im[q]) * node;
  }
  return total;
}

}  // namespace bgerbe::kernels
