#include "polar/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cstring>

namespace polar::kernels {

namespace {

// Lane-for-lane the same bit manipulation as the scalar f_node/g_node, so
// outputs are bit-identical to the scalar backend.

void f_sweep_avx2(const double* a, const double* b, double* out, size_t w) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    size_t k = 0;
    for (; k + 4 <= w; k += 4) {
        const __m256d va = _mm256_loadu_pd(a + k);
        const __m256d vb = _mm256_loadu_pd(b + k);
        const __m256d s = _mm256_xor_pd(_mm256_and_pd(va, sign), _mm256_and_pd(vb, sign));
        const __m256d m =
            _mm256_min_pd(_mm256_andnot_pd(sign, va), _mm256_andnot_pd(sign, vb));
        _mm256_storeu_pd(out + k, _mm256_or_pd(m, s));
    }
    for (; k < w; ++k) out[k] = f_node(a[k], b[k]);
}

void g_sweep_avx2(const double* a, const double* b, const uint8_t* partial_sums,
                  double* out, size_t w) {
    size_t k = 0;
    for (; k + 4 <= w; k += 4) {
        uint32_t packed;
        std::memcpy(&packed, partial_sums + k, 4);
        const __m256i flips =
            _mm256_slli_epi64(_mm256_cvtepu8_epi64(_mm_cvtsi32_si128(int(packed))), 63);
        const __m256d va =
            _mm256_xor_pd(_mm256_loadu_pd(a + k), _mm256_castsi256_pd(flips));
        _mm256_storeu_pd(out + k, _mm256_add_pd(va, _mm256_loadu_pd(b + k)));
    }
    for (; k < w; ++k) out[k] = g_node(a[k], b[k], partial_sums[k]);
}

}  // namespace

const Backend* avx2_backend() noexcept {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const Backend backend{"avx2", &f_sweep_avx2, &g_sweep_avx2};
    return &backend;
}

}  // namespace polar::kernels

#else

namespace polar::kernels {

const Backend* avx2_backend() noexcept { return nullptr; }

}  // namespace polar::kernels

#endif
