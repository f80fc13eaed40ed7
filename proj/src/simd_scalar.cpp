#include <cmath>

#include "unirate/simd.hpp"

namespace unirate::simd::scalar {

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v < kZeroProb) continue;
    h -= v * std::log2(v);
  }
  return h;
}

double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace unirate::simd::scalar
