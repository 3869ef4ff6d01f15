#include <immintrin.h>

#include <vector>

#include "bgerbe/kernels.hpp"

namespace bgerbe::kernels {

namespace {

struct C4 {
  __m256d re;
  __m256d im;
};

inline C4 mul(C4 a, C4 b) {
  return {_mm256_fmsub_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)),
          _mm256_fmadd_pd(a.re, b.im, _mm256_mul_pd(a.im, b.re))};
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

std::complex<double> pair_sum_avx2(const PairSumInput& in) {
  const std::size_t m = in.m;
  std::vector<C4> u(m);
  std::vector<C4> v(m);
  C4 acc{_mm256_setzero_pd(), _mm256_setzero_pd()};

  for (std::size_t q0 = 0; q0 < in.nodes; q0 += 4) {
    // Tail lanes sit at xi = 0 with zero weight; poles lie on the unit circle.
    alignas(32) double xr[4] = {0, 0, 0, 0};
    alignas(32) double xi[4] = {0, 0, 0, 0};
    alignas(32) double wr[4] = {0, 0, 0, 0};
    alignas(32) double wi[4] = {0, 0, 0, 0};
    const std::size_t lanes = in.nodes - q0 < 4 ? in.nodes - q0 : 4;
    for (std::size_t l = 0; l < lanes; ++l) {
      xr[l] = in.xi_re[q0 + l];
      xi[l] = in.xi_im[q0 + l];
      wr[l] = in.w_re[q0 + l];
      wi[l] = in.w_im[q0 + l];
    }
    const C4 x{_mm256_load_pd(xr), _mm256_load_pd(xi)};

    for (std::size_t i = 0; i < m; ++i) {
      const __m256d dr = _mm256_sub_pd(x.re, _mm256_set1_pd(in.lambda_re[i]));
      const __m256d di = _mm256_sub_pd(x.im, _mm256_set1_pd(in.lambda_im[i]));
      const __m256d den = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
      const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), den);
      u[i] = {_mm256_mul_pd(dr, inv), _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(di, inv))};
      v[i] = mul(u[i], u[i]);
    }

    C4 node{_mm256_setzero_pd(), _mm256_setzero_pd()};
    for (std::size_t i = 0; i < m; ++i) {
      C4 row{_mm256_setzero_pd(), _mm256_setzero_pd()};
      for (std::size_t j = 0; j < m; ++j) {
        const __m256d cr = _mm256_set1_pd(in.c_re[i * m + j]);
        const __m256d ci = _mm256_set1_pd(in.c_im[i * m + j]);
        row.re = _mm256_fmadd_pd(cr, v[j].re, _mm256_fnmadd_pd(ci, v[j].im, row.re));
        row.im = _mm256_fmadd_pd(cr, v[j].im, _mm256_fmadd_pd(ci, v[j].re, row.im));
      }
      const C4 t = mul(u[i], row);
      node.re = _mm256_add_pd(node.re, t.re);
      node.im = _mm256_add_pd(node.im, t.im);
    }

    const C4 w{_mm256_load_pd(wr), _mm256_load_pd(wi)};
    const C4 t = mul(w, node);
    acc.re = _mm256_add_pd(acc.re, t.re);
    acc.im = _mm256_add_pd(acc.im, t.im);
  }
  return {hsum(acc.re), hsum(acc.im)};
}

}  // namespace bgerbe::kernels
