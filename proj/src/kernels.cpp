#include "polar/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace polar::kernels {

namespace {

std::atomic<const Backend*> g_active{nullptr};

const Backend* best_available() noexcept {
    if (const Backend* b = avx2_backend()) return b;
    return &scalar_backend();
}

}  // namespace

const Backend& active_backend() noexcept {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (b == nullptr) {
        b = best_available();
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

void select_backend(const char* name) {
    const std::string wanted(name ? name : "auto");
    if (wanted == "auto") {
        g_active.store(best_available(), std::memory_order_release);
    } else if (wanted == "scalar") {
        g_active.store(&scalar_backend(), std::memory_order_release);
    } else if (wanted == "avx2") {
        const Backend* b = avx2_backend();
        if (b == nullptr) throw std::runtime_error("avx2 kernels unavailable on this machine");
        g_active.store(b, std::memory_order_release);
    } else {
        throw std::invalid_argument("unknown kernel backend: " + wanted);
    }
}

}  // namespace polar::kernels
