// Built with -mavx2 -mfma; only reached through the runtime dispatcher.
#include "unirate/simd.hpp"

#if UNIRATE_SIMD_X86

#include <immintrin.h>

#include <cmath>

namespace unirate::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

// log2 for positive normal doubles: exponent split, then 2*atanh((m-1)/(m+1)) series
// with m in [sqrt(1/2), sqrt(2)); truncation error is below 1e-17 relative.
inline __m256d log2_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i exp_mask = _mm256_set1_epi64x(0x7ff);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
  const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);

  __m256i biased = _mm256_and_si256(_mm256_srli_epi64(bits, 52), exp_mask);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, magic_bits)), magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  __m256d z = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(2.0 / 21.0);
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0 / 19.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0 / 17.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0 / 15.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0 / 3.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(2.0));
  __m256d ln_m = _mm256_mul_pd(poly, s);
  return _mm256_fmadd_pd(ln_m, _mm256_set1_pd(1.4426950408889634), e);
}

}  // namespace

double entropy_bits(std::span<const double> p) {
  const std::size_t n = p.size();
  const __m256d floor = _mm256_set1_pd(kZeroProb);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(p.data() + i);
    __m256d keep = _mm256_cmp_pd(v, floor, _CMP_GE_OQ);
    __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), v, keep);
    __m256d term = _mm256_mul_pd(safe, log2_pd(safe));
    acc = _mm256_add_pd(acc, _mm256_and_pd(term, keep));
  }
  double h = -hsum(acc);
  for (; i < n; ++i) {
    if (p[i] < kZeroProb) continue;
    h -= p[i] * std::log2(p[i]);
  }
  return h;
}

double sum(std::span<const double> v) {
  const std::size_t n = v.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v.data() + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += v[i];
  return s;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, d));
  }
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace unirate::simd::avx2

#endif
