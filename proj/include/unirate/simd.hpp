#pragma once

#include <cstddef>
#include <span>

// Dense numeric kernels: a scalar reference plus an AVX2/FMA variant chosen at runtime.

#if defined(__x86_64__) || defined(_M_X64)
#define UNIRATE_SIMD_X86 1
#else
#define UNIRATE_SIMD_X86 0
#endif

namespace unirate::simd {

enum class Isa { Scalar, Avx2 };

// probabilities below this count as exact zeros in entropy sums
inline constexpr double kZeroProb = 1e-15;

Isa detected_isa();
Isa active_isa();
// force a variant (tests); requesting Avx2 on a host without it falls back to Scalar
void set_isa(Isa isa);
const char* isa_name(Isa isa);

double entropy_bits(std::span<const double> p);
double sum(std::span<const double> v);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

namespace scalar {
double entropy_bits(std::span<const double> p);
double sum(std::span<const double> v);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

#if UNIRATE_SIMD_X86
namespace avx2 {
double entropy_bits(std::span<const double> p);
double sum(std::span<const double> v);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
}  // namespace avx2
#endif

}  // namespace unirate::simd
