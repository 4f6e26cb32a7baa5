#include "polar/code_spec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "polar/transform.hpp"

namespace polar {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// Gaussian-approximation density evolution in the log domain.  log_phi is
// the usual two-piece fit of E[tanh(L/2)] for L ~ N(m, 2m); the check-node
// step is evaluated on log(phi) so that the large means produced by the
// variable-node doubling do not underflow.

double log_phi(double x) {
    if (x <= 0.0) return 0.0218;
    if (x < 10.0) return -0.4527 * std::pow(x, 0.86) + 0.0218;
    return 0.5 * (std::log(M_PI) - std::log(x)) - 0.25 * x + std::log1p(-10.0 / (7.0 * x));
}

double inv_log_phi(double y) {
    double lo = 0.0, hi = 1e9;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (log_phi(mid) > y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double check_mean(double m) {
    const double y = log_phi(m);
    // log(1 - (1-phi)^2) = log(phi) + log(2 - phi), stable for tiny phi
    const double yf = y + (y < -700.0 ? std::log(2.0) : std::log(2.0 - std::exp(y)));
    return inv_log_phi(yf);
}

void finish_spec(CodeSpec& spec) {
    std::sort(spec.info_set.begin(), spec.info_set.end());
    spec.is_info.assign(spec.block_length, 0);
    for (uint32_t idx : spec.info_set) spec.is_info[idx] = 1;
}

}  // namespace

std::vector<double> ga_reliability(uint32_t block_length, double design_snr_db, double rate) {
    require(std::has_single_bit(block_length) && block_length >= 2, "block length must be a power of two >= 2");
    require(rate > 0.0 && rate <= 1.0, "rate must be in (0, 1]");
    const int n = std::countr_zero(block_length);
    const double sigma_sq = 1.0 / (2.0 * rate * std::pow(10.0, design_snr_db / 10.0));
    std::vector<double> means{2.0 / sigma_sq};
    for (int level = 0; level < n; ++level) {
        std::vector<double> next(means.size() * 2);
        for (size_t k = 0; k < means.size(); ++k) {
            next[2 * k] = check_mean(means[k]);
            next[2 * k + 1] = 2.0 * means[k];
        }
        means = std::move(next);
    }
    return means;  // means[i] indexed by the decoder's natural bit order
}

CodeSpec construct(uint32_t block_length, uint32_t payload_bits, uint32_t crc_bits,
                   uint32_t crc_poly, double design_snr_db) {
    require(std::has_single_bit(block_length) && block_length >= 2, "block length must be a power of two >= 2");
    const uint32_t info_bits = payload_bits + crc_bits;
    require(info_bits >= 1 && info_bits <= block_length, "need 1 <= K+crc <= N");
    require(crc_bits <= 32, "crc width above 32 unsupported");
    require(crc_bits == 0 || (crc_poly >> crc_bits) == 0, "crc polynomial wider than crc size");

    CodeSpec spec;
    spec.block_length = block_length;
    spec.levels = std::countr_zero(block_length);
    spec.payload_bits = payload_bits;
    spec.crc_bits = crc_bits;
    spec.crc_poly = crc_bits ? crc_poly : 0;
    spec.design_snr_db = design_snr_db;

    const double rate = payload_bits > 0 ? double(payload_bits) / block_length
                                         : double(info_bits) / block_length;
    const std::vector<double> means = ga_reliability(block_length, design_snr_db, rate);
    std::vector<uint32_t> order(block_length);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (means[a] != means[b]) return means[a] > means[b];
        return a < b;
    });
    spec.info_set.assign(order.begin(), order.begin() + info_bits);
    finish_spec(spec);
    return spec;
}

CodeSpec load_info_set(const std::string& path, uint32_t crc_bits, uint32_t crc_poly) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open info-set file: " + path);

    CodeSpec spec;
    spec.crc_bits = crc_bits;
    spec.crc_poly = crc_bits ? crc_poly : 0;

    auto fail = [&](int line, const std::string& what) {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
    };

    std::vector<uint8_t> seen;
    std::string text;
    bool have_length = false;
    for (int line = 1; std::getline(in, text); ++line) {
        std::replace(text.begin(), text.end(), ';', ' ');
        std::istringstream tokens(text);
        std::string token;
        while (tokens >> token) {
            if (!have_length) {
                if (token.rfind("N=", 0) != 0) fail(line, "expected N=<block length> first");
                unsigned long value = 0;
                try {
                    value = std::stoul(token.substr(2));
                } catch (const std::exception&) {
                    fail(line, "unreadable block length '" + token + "'");
                }
                if (value < 2 || !std::has_single_bit(value))
                    fail(line, "block length must be a power of two >= 2");
                spec.block_length = uint32_t(value);
                spec.levels = std::countr_zero(spec.block_length);
                seen.assign(spec.block_length, 0);
                have_length = true;
                continue;
            }
            unsigned long idx = 0;
            try {
                size_t used = 0;
                idx = std::stoul(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                fail(line, "unreadable index '" + token + "'");
            }
            if (idx >= spec.block_length) fail(line, "index " + token + " out of range");
            if (seen[idx]) fail(line, "duplicate index " + token);
            seen[idx] = 1;
            spec.info_set.push_back(uint32_t(idx));
        }
    }
    if (!have_length) throw std::runtime_error(path + ": missing N=<block length>");
    if (spec.info_set.size() < crc_bits)
        throw std::runtime_error(path + ": fewer information indices than CRC bits");
    if (spec.info_set.empty()) throw std::runtime_error(path + ": empty information set");
    spec.payload_bits = uint32_t(spec.info_set.size()) - crc_bits;
    finish_spec(spec);
    return spec;
}

void save_info_set(const CodeSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write info-set file: " + path);
    out << "N=" << spec.block_length << "\n";
    for (uint32_t idx : spec.info_set) out << idx << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<uint8_t> crc_remainder(std::span<const uint8_t> message, uint32_t poly, uint32_t bits) {
    uint32_t reg = 0;
    const uint32_t mask = bits >= 32 ? ~uint32_t{0} : (uint32_t{1} << bits) - 1;
    for (uint8_t b : message) {
        const uint32_t feedback = ((reg >> (bits - 1)) ^ b) & 1u;
        reg = (reg << 1) & mask;
        if (feedback) reg ^= poly;
    }
    std::vector<uint8_t> out(bits);
    for (uint32_t t = 0; t < bits; ++t) out[t] = (reg >> (bits - 1 - t)) & 1u;
    return out;
}

std::vector<uint8_t> crc_attach(std::span<const uint8_t> payload, const CodeSpec& spec) {
    require(payload.size() == spec.payload_bits, "payload length mismatch");
    std::vector<uint8_t> word(payload.begin(), payload.end());
    if (spec.crc_bits) {
        const auto rem = crc_remainder(payload, spec.crc_poly, spec.crc_bits);
        word.insert(word.end(), rem.begin(), rem.end());
    }
    return word;
}

bool crc_check(std::span<const uint8_t> word, const CodeSpec& spec) {
    require(word.size() == size_t(spec.payload_bits) + spec.crc_bits, "word length mismatch");
    if (spec.crc_bits == 0) return true;
    const auto rem = crc_remainder(word.first(spec.payload_bits), spec.crc_poly, spec.crc_bits);
    return std::equal(rem.begin(), rem.end(), word.begin() + spec.payload_bits);
}

std::vector<uint8_t> frame_from_payload(std::span<const uint8_t> payload, const CodeSpec& spec) {
    const auto word = crc_attach(payload, spec);
    std::vector<uint8_t> u(spec.block_length, 0);
    for (size_t m = 0; m < word.size(); ++m) u[spec.info_set[m]] = word[m] & 1;
    return u;
}

std::vector<uint8_t> encode(std::span<const uint8_t> u, const CodeSpec& spec) {
    require(u.size() == spec.block_length, "input length mismatch");
    std::vector<uint8_t> transformed(u.begin(), u.end());
    polar_transform(transformed);
    std::vector<uint8_t> x(spec.block_length);
    for (uint32_t j = 0; j < spec.block_length; ++j)
        x[j] = transformed[bit_reverse(j, spec.levels)];
    return x;
}

std::vector<uint8_t> info_word(std::span<const uint8_t> decisions, const CodeSpec& spec) {
    require(decisions.size() == spec.block_length, "decision length mismatch");
    std::vector<uint8_t> word(spec.info_set.size());
    for (size_t m = 0; m < word.size(); ++m) word[m] = decisions[spec.info_set[m]] & 1;
    return word;
}

std::vector<uint8_t> extract_payload(std::span<const uint8_t> decisions, const CodeSpec& spec) {
    auto word = info_word(decisions, spec);
    word.resize(spec.payload_bits);
    return word;
}

}  // namespace polar
