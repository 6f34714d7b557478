#include <doctest.h>

#include <random>
#include <vector>

#include "holant/kernels.hpp"

using namespace holant::kernels;
using C = std::complex<double>;

namespace {

// Direct definition: out[x] = sum_z m[x_leg][z] v[x with leg := z].
std::vector<C> reference(const std::vector<C>& v, int arity, int leg, const C m[4]) {
  std::vector<C> out(v.size());
  const std::size_t bit = std::size_t(1) << (arity - 1 - leg);
  for (std::size_t x = 0; x < v.size(); ++x) {
    int r = (x & bit) ? 1 : 0;
    out[x] = m[2 * r] * v[x & ~bit] + m[2 * r + 1] * v[x | bit];
  }
  return out;
}

}  // namespace

TEST_CASE("scalar and avx2 leg kernels agree with the definition") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  for (int arity = 1; arity <= 10; ++arity)
    for (int leg = 0; leg < arity; ++leg) {
      std::vector<C> v(std::size_t(1) << arity);
      for (auto& z : v) z = C(d(rng), d(rng));
      C m[4] = {C(d(rng), d(rng)), C(d(rng), d(rng)), C(d(rng), d(rng)), C(d(rng), d(rng))};
      auto ref = reference(v, arity, leg, m);
      auto s = v;
      apply_leg_scalar(s.data(), arity, leg, m);
      for (std::size_t x = 0; x < v.size(); ++x) CHECK(std::abs(s[x] - ref[x]) < 1e-12);
      if (best_path() == Path::Avx2) {
        auto a = v;
        apply_leg_avx2(a.data(), arity, leg, m);
        // same operation order, so bit-identical
        for (std::size_t x = 0; x < v.size(); ++x) CHECK(a[x] == s[x]);
      }
    }
}

TEST_CASE("path names") {
  CHECK(std::string(path_name(Path::Scalar)) == "scalar");
  CHECK(std::string(path_name(Path::Avx2)) == "avx2");
}
