#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace polar {

/// Noise level for BPSK over AWGN at a given Eb/N0; rate counts payload
/// bits only (CRC is overhead).
double awgn_sigma(double ebn0_db, double rate);

// Deterministic per-frame random stream: frame f of a run is the same bit
// and noise sequence no matter how frames are distributed across workers.
class FrameRng {
public:
    FrameRng(uint64_t seed, uint64_t frame);

    uint64_t bits() { return engine_(); }
    uint8_t bit() { return uint8_t(engine_() >> 63); }

    /// Standard normal deviate (Box-Muller; implementation-pinned so streams
    /// are reproducible across standard libraries).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// BPSK-map the codeword (bit b -> 1-2b), add N(0, sigma^2) noise, return
/// channel LLRs 2y/sigma^2.  sigma == 0 degenerates to hard +/-infinity-like
/// LLRs of magnitude `noiseless_magnitude`.
std::vector<double> transmit(std::span<const uint8_t> codeword, double sigma, FrameRng& rng);

/// Channel LLRs for a noiseless observation of the codeword.
std::vector<double> noiseless_llrs(std::span<const uint8_t> codeword,
                                   double magnitude = 200.0);

inline constexpr double noiseless_magnitude = 200.0;

std::vector<uint8_t> random_payload(uint32_t bits, FrameRng& rng);

}  // namespace polar
