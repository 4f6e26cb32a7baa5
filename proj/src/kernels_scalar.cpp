#include "polar/kernels.hpp"

namespace polar::kernels {

namespace {

void f_sweep_scalar(const double* a, const double* b, double* out, size_t w) {
    for (size_t k = 0; k < w; ++k) out[k] = f_node(a[k], b[k]);
}

void g_sweep_scalar(const double* a, const double* b, const uint8_t* partial_sums,
                    double* out, size_t w) {
    for (size_t k = 0; k < w; ++k) out[k] = g_node(a[k], b[k], partial_sums[k]);
}

}  // namespace

const Backend& scalar_backend() noexcept {
    static const Backend backend{"scalar", &f_sweep_scalar, &g_sweep_scalar};
    return backend;
}

}  // namespace polar::kernels
