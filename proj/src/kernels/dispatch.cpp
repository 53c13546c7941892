#include <atomic>

#include "splab/kernels/cauchy.hpp"

namespace splab::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(SPLAB_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() noexcept { return cpu_has_avx2() ? Isa::Avx2 : Isa::Generic; }

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "generic";
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) noexcept {
  return isa == Isa::Generic || cpu_has_avx2();
}

bool force_isa(Isa isa) noexcept {
  if (!isa_available(isa)) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

CauchySums cauchy_sums(AtomView atoms, Complex z, std::size_t skip) {
#if defined(SPLAB_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::cauchy_sums(atoms, z, skip);
#endif
  return generic::cauchy_sums(atoms, z, skip);
}

}  // namespace splab::kernels
