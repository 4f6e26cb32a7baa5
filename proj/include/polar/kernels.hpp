#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>

// min-sum check/variable node arithmetic for LLR stage sweeps.
//
// Both node functions are written against the sign bit rather than with
// branches so that the scalar and SIMD backends produce bit-identical
// doubles (including signed zeros); the whole-stage sweeps are dispatched
// at runtime based on what the CPU supports.

namespace polar::kernels {

inline constexpr uint64_t kSignBit = 0x8000000000000000ull;

/// Check-node combine: sign(a)*sign(b)*min(|a|,|b|), zeros sign-propagated.
inline double f_node(double a, double b) noexcept {
    const uint64_t ua = std::bit_cast<uint64_t>(a);
    const uint64_t ub = std::bit_cast<uint64_t>(b);
    const double ma = std::bit_cast<double>(ua & ~kSignBit);
    const double mb = std::bit_cast<double>(ub & ~kSignBit);
    const double m = ma < mb ? ma : mb;
    return std::bit_cast<double>(std::bit_cast<uint64_t>(m) | ((ua ^ ub) & kSignBit));
}

/// Variable-node combine: b + a, with a negated when the partial sum is 1.
inline double g_node(double a, double b, uint8_t partial_sum) noexcept {
    return std::bit_cast<double>(std::bit_cast<uint64_t>(a) ^ (uint64_t(partial_sum) << 63)) + b;
}

using FSweepFn = void (*)(const double* a, const double* b, double* out, size_t w);
using GSweepFn = void (*)(const double* a, const double* b, const uint8_t* partial_sums,
                          double* out, size_t w);

struct Backend {
    const char* name;
    FSweepFn f_sweep;  // out[k] = f_node(a[k], b[k])
    GSweepFn g_sweep;  // out[k] = g_node(a[k], b[k], partial_sums[k])
};

const Backend& scalar_backend() noexcept;

/// AVX2 backend, or nullptr when the build target or CPU lacks it.
const Backend* avx2_backend() noexcept;

/// Currently selected backend (best available unless overridden).
const Backend& active_backend() noexcept;

/// Select "auto", "scalar" or "avx2"; throws if the name is unknown or the
/// requested backend is unavailable on this machine.
void select_backend(const char* name);

}  // namespace polar::kernels
