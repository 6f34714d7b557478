#include "holant/kernels.hpp"

#include <cstddef>

namespace holant::kernels {

namespace {

inline void cmul_add(double ar, double ai, double br, double bi, double cr, double ci, double dr, double di,
                     double& outr, double& outi) {
  // a*b + c*d, spelled out so the vector path can match it operation for operation
  double pr = ar * br - ai * bi;
  double pi = ai * br + ar * bi;
  double qr = cr * dr - ci * di;
  double qi = ci * dr + cr * di;
  outr = pr + qr;
  outi = pi + qi;
}

}  // namespace

void apply_leg_scalar(std::complex<double>* v, int arity, int leg, const std::complex<double> m[4]) {
  const std::size_t n = std::size_t(1) << arity;
  const std::size_t s = std::size_t(1) << (arity - 1 - leg);
  double* d = reinterpret_cast<double*>(v);
  for (std::size_t base = 0; base < n; base += 2 * s) {
    for (std::size_t j = 0; j < s; ++j) {
      std::size_t lo = base + j, hi = lo + s;
      double lr = d[2 * lo], li = d[2 * lo + 1], hr = d[2 * hi], hi_ = d[2 * hi + 1];
      double r0, i0, r1, i1;
      cmul_add(lr, li, m[0].real(), m[0].imag(), hr, hi_, m[1].real(), m[1].imag(), r0, i0);
      cmul_add(lr, li, m[2].real(), m[2].imag(), hr, hi_, m[3].real(), m[3].imag(), r1, i1);
      d[2 * lo] = r0;
      d[2 * lo + 1] = i0;
      d[2 * hi] = r1;
      d[2 * hi + 1] = i1;
    }
  }
}

#if !(defined(__x86_64__) || defined(__i386__))
void apply_leg_avx2(std::complex<double>* v, int arity, int leg, const std::complex<double> m[4]) {
  apply_leg_scalar(v, arity, leg, m);
}
#endif

Path best_path() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool has = __builtin_cpu_supports("avx2");
  return has ? Path::Avx2 : Path::Scalar;
#else
  return Path::Scalar;
#endif
}

const char* path_name(Path p) { return p == Path::Avx2 ? "avx2" : "scalar"; }

void apply_leg(std::complex<double>* v, int arity, int leg, const std::complex<double> m[4], Path p) {
  if (p == Path::Avx2)
    apply_leg_avx2(v, arity, leg, m);
  else
    apply_leg_scalar(v, arity, leg, m);
}

}  // namespace holant::kernels
