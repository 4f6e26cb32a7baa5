#include "polar/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace polar {

namespace {

uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

double awgn_sigma(double ebn0_db, double rate) {
    if (rate <= 0.0 || rate > 1.0) throw std::invalid_argument("rate must be in (0, 1]");
    return std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0)));
}

FrameRng::FrameRng(uint64_t seed, uint64_t frame) {
    uint64_t state = seed ^ (0x632BE59BD9B4E019ull * (frame + 1));
    splitmix64(state);
    engine_.seed(splitmix64(state));
}

double FrameRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // uniforms in (0,1]; the ldexp puts 53 random bits behind the point
    const double u1 = 1.0 - std::ldexp(double(engine_() >> 11), -53);
    const double u2 = std::ldexp(double(engine_() >> 11), -53);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

std::vector<double> transmit(std::span<const uint8_t> codeword, double sigma, FrameRng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
    std::vector<double> llrs(codeword.size());
    if (sigma == 0.0) {
        for (size_t j = 0; j < codeword.size(); ++j)
            llrs[j] = codeword[j] ? -noiseless_magnitude : noiseless_magnitude;
        return llrs;
    }
    const double scale = 2.0 / (sigma * sigma);
    for (size_t j = 0; j < codeword.size(); ++j) {
        const double symbol = codeword[j] ? -1.0 : 1.0;
        llrs[j] = scale * (symbol + sigma * rng.normal());
    }
    return llrs;
}

std::vector<double> noiseless_llrs(std::span<const uint8_t> codeword, double magnitude) {
    std::vector<double> llrs(codeword.size());
    for (size_t j = 0; j < codeword.size(); ++j)
        llrs[j] = codeword[j] ? -magnitude : magnitude;
    return llrs;
}

std::vector<uint8_t> random_payload(uint32_t bits, FrameRng& rng) {
    std::vector<uint8_t> payload(bits);
    for (auto& b : payload) b = rng.bit();
    return payload;
}

}  // namespace polar
