#include <immintrin.h>

#include <cstddef>

#include "holant/kernels.hpp"

namespace holant::kernels {

namespace {

// Two complex values per register: (r0, i0, r1, i1) times broadcast (br, bi).
inline __m256d cmul(__m256d x, double br, double bi) {
  __m256d re = _mm256_mul_pd(x, _mm256_set1_pd(br));
  __m256d sw = _mm256_permute_pd(x, 0x5);
  __m256d im = _mm256_mul_pd(sw, _mm256_set1_pd(bi));
  return _mm256_addsub_pd(re, im);
}

}  // namespace

void apply_leg_avx2(std::complex<double>* v, int arity, int leg, const std::complex<double> m[4]) {
  const std::size_t n = std::size_t(1) << arity;
  const std::size_t s = std::size_t(1) << (arity - 1 - leg);
  if (s < 2) {
    apply_leg_scalar(v, arity, leg, m);
    return;
  }
  double* d = reinterpret_cast<double*>(v);
  for (std::size_t base = 0; base < n; base += 2 * s) {
    for (std::size_t j = 0; j < s; j += 2) {
      double* plo = d + 2 * (base + j);
      double* phi = d + 2 * (base + j + s);
      __m256d lo = _mm256_loadu_pd(plo);
      __m256d hi = _mm256_loadu_pd(phi);
      __m256d r0 = _mm256_add_pd(cmul(lo, m[0].real(), m[0].imag()), cmul(hi, m[1].real(), m[1].imag()));
      __m256d r1 = _mm256_add_pd(cmul(lo, m[2].real(), m[2].imag()), cmul(hi, m[3].real(), m[3].imag()));
      _mm256_storeu_pd(plo, r0);
      _mm256_storeu_pd(phi, r1);
    }
  }
}

}  // namespace holant::kernels
