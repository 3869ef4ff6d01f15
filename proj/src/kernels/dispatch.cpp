#include <cstdlib>
#include <string_view>

#include "bgerbe/kernels.hpp"

namespace bgerbe::kernels {

#if !defined(BGERBE_HAVE_AVX2)
std::complex<double> pair_sum_avx2(const PairSumInput& in) { return pair_sum_scalar(in); }
#endif

bool avx2_available() {
#if defined(BGERBE_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() {
  static const Backend chosen = [] {
    if (const char* env = std::getenv("BGERBE_KERNEL")) {
      if (std::string_view(env) == "scalar") return Backend::Scalar;
    }
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
  }();
  return chosen;
}

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

std::complex<double> pair_sum(const PairSumInput& in, Backend b) {
  if (b == Backend::Avx2 && avx2_available()) return pair_sum_avx2(in);
  return pair_sum_scalar(in);
}

std::complex<double> pair_sum(const PairSumInput& in) { return pair_sum(in, active_backend()); }

}  // namespace bgerbe::kernels
