#pragma once

#include <cstdint>
#include <span>

namespace polar {

/// Reverse the low `bits` bits of v.
constexpr uint32_t bit_reverse(uint32_t v, int bits) noexcept {
    uint32_t r = 0;
    for (int t = 0; t < bits; ++t) r |= ((v >> t) & 1u) << (bits - 1 - t);
    return r;
}

/// In-place GF(2) polar transform over a power-of-two span, natural order:
/// (a, b) -> (a xor b, b) applied recursively on contiguous halves.
/// Self-inverse, so applying it twice restores the input.
inline void polar_transform(std::span<uint8_t> bits) noexcept {
    const size_t len = bits.size();
    for (size_t step = 1; step < len; step <<= 1)
        for (size_t base = 0; base < len; base += 2 * step)
            for (size_t k = 0; k < step; ++k)
                bits[base + k] ^= bits[base + step + k];
}

}  // namespace polar
