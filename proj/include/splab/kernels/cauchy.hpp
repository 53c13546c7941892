#pragma once
// Compensated Cauchy sums over a discrete measure.
//
// For atoms t_n (real, nonzero) with complex weights w_n and a point z, the
// kernels return
//     over_t  = sum_n w_n / (t_n (t_n - z))
//     squared = sum_n w_n / (t_n - z)^2
// so that  sum_n w_n (1/(t_n - z) - 1/t_n) = z * over_t  and its z-derivative
// is `squared`. One index may be skipped (the caller handles the nearest pole
// analytically). Each lane carries its own Kahan compensation.

#include <cstddef>
#include <span>
#include <string_view>

#include "splab/types.hpp"

namespace splab::kernels {

struct CauchySums {
  Complex over_t{};
  Complex squared{};
};

/// Structure-of-arrays view of the atoms; all spans have equal length.
struct AtomView {
  std::span<const double> t;
  std::span<const double> wr;
  std::span<const double> wi;
};

inline constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

enum class Isa { Generic, Avx2 };

std::string_view to_string(Isa isa) noexcept;

namespace generic {
CauchySums cauchy_sums(AtomView atoms, Complex z, std::size_t skip);
}

#if defined(SPLAB_HAVE_AVX2)
namespace avx2 {
CauchySums cauchy_sums(AtomView atoms, Complex z, std::size_t skip);
}
#endif

/// ISA picked at startup: AVX2 when the CPU reports avx2+fma.
Isa active_isa() noexcept;
bool isa_available(Isa isa) noexcept;
/// Overrides the runtime choice; returns false when `isa` is unavailable.
bool force_isa(Isa isa) noexcept;

/// Dispatching entry point.
CauchySums cauchy_sums(AtomView atoms, Complex z, std::size_t skip = kNoSkip);

}  // namespace splab::kernels
