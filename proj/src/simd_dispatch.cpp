#include <atomic>

#include "unirate/simd.hpp"

namespace unirate::simd {

namespace {

Isa probe() {
#if UNIRATE_SIMD_X86 && defined(__GNUC__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<int>& current() {
  static std::atomic<int> isa{static_cast<int>(probe())};
  return isa;
}

}  // namespace

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() { return static_cast<Isa>(current().load(std::memory_order_relaxed)); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
  current().store(static_cast<int>(isa), std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double entropy_bits(std::span<const double> p) {
#if UNIRATE_SIMD_X86
  if (active_isa() == Isa::Avx2) return avx2::entropy_bits(p);
#endif
  return scalar::entropy_bits(p);
}

double sum(std::span<const double> v) {
#if UNIRATE_SIMD_X86
  if (active_isa() == Isa::Avx2) return avx2::sum(v);
#endif
  return scalar::sum(v);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
#if UNIRATE_SIMD_X86
  if (active_isa() == Isa::Avx2) return avx2::max_abs_diff(a, b);
#endif
  return scalar::max_abs_diff(a, b);
}

}  // namespace unirate::simd
