#include <random>

#include "doctest.h"
#include "unirate/simd.hpp"

using namespace unirate;

TEST_CASE("avx2 kernels agree with scalar reference") {
  if (simd::detected_isa() != simd::Isa::Avx2) {
    MESSAGE("host lacks AVX2/FMA; scalar only");
    return;
  }
#if UNIRATE_SIMD_X86
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1000u, 4099u}) {
    std::vector<double> p(n), q(n);
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = (i % 5 == 0) ? 0.0 : u(rng);
      q[i] = u(rng);
      s += p[i];
    }
    for (auto& v : p) v /= (s > 0 ? s : 1);
    if (n > 2) p[1] = 1e-300;  // subnormal-adjacent values must be masked
    CHECK(simd::avx2::entropy_bits(p) == doctest::Approx(simd::scalar::entropy_bits(p)).epsilon(1e-13));
    CHECK(simd::avx2::sum(q) == doctest::Approx(simd::scalar::sum(q)).epsilon(1e-13));
    CHECK(simd::avx2::max_abs_diff(p, q) == simd::scalar::max_abs_diff(p, q));
  }
#endif
}

TEST_CASE("dispatch can be forced") {
  simd::set_isa(simd::Isa::Scalar);
  CHECK(simd::active_isa() == simd::Isa::Scalar);
  std::vector<double> p = {0.25, 0.25, 0.5};
  CHECK(simd::entropy_bits(p) == doctest::Approx(1.5));
  simd::set_isa(simd::detected_isa());
  CHECK(simd::entropy_bits(p) == doctest::Approx(1.5).epsilon(1e-14));
}
