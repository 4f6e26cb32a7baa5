#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "polar/code_spec.hpp"
#include "polar/sc_memory.hpp"

namespace polar {

struct AttemptRecord {
    uint32_t target = 0;  // bit flipped / pruning window shifted (unused on attempt 1)
    uint32_t resume = 0;  // bit index decoding resumed from
    bool crc_pass = false;
};

struct DecodeOutcome {
    std::vector<uint8_t> payload;  // K bits
    bool success = false;
    int attempts = 1;
    uint64_t time_steps_total = 0;
    uint64_t time_steps_additional = 0;
    uint64_t node_visits_total = 0;
    uint64_t node_visits_additional = 0;
    std::vector<AttemptRecord> trace;
};

/// Negative LLR decides 1; zero (either sign) decides 0.
inline uint8_t hard_decision(double llr) noexcept { return llr < 0.0 ? 1 : 0; }

/// Channel LLRs arrive in codeword order; the decoder graph consumes them
/// bit-reversed.
std::vector<double> to_decoder_order(const CodeSpec& spec, std::span<const double> channel_llrs);

/// Ranks retry targets from (bit, score) pairs recorded in the failed first
/// pass; lower score = tried earlier.  Swappable so alternative flip or
/// pruning-risk heuristics do not touch the rewind logic.
using RetryRanker =
    std::function<std::vector<uint32_t>(const std::vector<std::pair<uint32_t, double>>&)>;
std::vector<uint32_t> rank_by_ascending_score(
    const std::vector<std::pair<uint32_t, double>>& scored);

// ---------------------------------------------------------------------------
// plain successive cancellation

class ScDecoder {
public:
    explicit ScDecoder(const CodeSpec& spec) : spec_(&spec) {}
    DecodeOutcome decode(std::span<const double> channel_llrs);
    const std::vector<uint8_t>& last_decisions() const noexcept { return mem_.decisions(); }

private:
    const CodeSpec* spec_;
    ScMemory mem_;
    std::vector<double> reordered_;
};

// ---------------------------------------------------------------------------
// SC-flip: retry with one low-confidence decision flipped per attempt,
// re-decoding only from the rewind resume point

struct FlipOptions {
    int max_retries = 8;
    bool partial_rewind = true;
    RetryRanker ranker;  // default: ascending |decision LLR|
};

class ScFlipDecoder {
public:
    explicit ScFlipDecoder(const CodeSpec& spec, FlipOptions options = {})
        : spec_(&spec), options_(std::move(options)) {}
    DecodeOutcome decode(std::span<const double> channel_llrs);
    const std::vector<uint8_t>& last_decisions() const noexcept { return mem_.decisions(); }

private:
    const CodeSpec* spec_;
    FlipOptions options_;
    ScMemory mem_;
    std::vector<double> reordered_;
    std::vector<std::pair<uint32_t, double>> scores_;
    std::vector<uint8_t> first_decisions_;
};

// ---------------------------------------------------------------------------
// CRC-aided successive cancellation list decoding, with optional
// shifted-pruning retries restricted to resume points {0, N/2}

struct SpOptions {
    int max_retries = 8;
    bool partial_rewind = true;
    RetryRanker ranker;  // default: ascending surviving-|LLR| margin
};

class SclDecoder {
public:
    struct PathReport {
        double metric = 0.0;
        std::vector<uint8_t> decisions;
    };

    SclDecoder(const CodeSpec& spec, uint32_t list_size);

    /// Single-attempt CA-SCL.
    DecodeOutcome decode(std::span<const double> channel_llrs);

    /// CA-SCL with shifted-pruning retries.
    DecodeOutcome decode_shifted(std::span<const double> channel_llrs, const SpOptions& options);

    /// Surviving paths after the last attempt, slot order.
    std::vector<PathReport> last_list() const;

private:
    struct Slot {
        bool alive = false;
        double metric = 0.0;
        ScMemory mem;
    };
    struct PassResult {
        int winner = -1;  // slot of the reported path
        bool crc_ok = false;
        uint64_t time_steps = 0;
        uint64_t node_visits = 0;
    };

    void start_frame(std::span<const double> channel_llrs);
    void reset_paths();
    void restore_midpoint();
    PassResult run_pass(uint32_t from, int64_t shift_bit, bool record);
    uint64_t total_node_visits() const;
    DecodeOutcome outcome_from(const PassResult& pass) const;

    const CodeSpec* spec_;
    uint32_t list_size_;
    std::vector<Slot> slots_;
    std::vector<double> reordered_;
    std::vector<double> path_llr_;
    std::vector<std::pair<uint32_t, double>> margins_;
    std::vector<uint8_t> snapshot_alive_;
    std::vector<MidSnapshot> snapshots_;
    bool have_snapshot_ = false;
};

// ---------------------------------------------------------------------------
// full-memory reference decoder: every factor-graph value has its own slot,
// so the cursor can legally move back to any index; ground truth for all
// rewind-soundness tests

class FullScDecoder {
public:
    explicit FullScDecoder(std::span<const double> decoder_order_llrs);

    uint32_t block_length() const noexcept { return block_length_; }
    uint32_t cursor() const noexcept { return cursor_; }
    const std::vector<uint8_t>& decisions() const noexcept { return decisions_; }

    double decision_llr(uint32_t i);
    void commit(uint32_t i, uint8_t value);
    void rewind(uint32_t resume);  // any resume <= cursor

private:
    uint32_t block_length_ = 0;
    int levels_ = 0;
    uint32_t cursor_ = 0;
    std::vector<std::vector<double>> llr_;  // [stage][position], stage levels_ = channel
    std::vector<uint8_t> decisions_;
    std::vector<uint8_t> scratch_;
};

/// Full-memory SC decode (codeword-order LLRs) with the decisions at the
/// given bits flipped; the reference result for rewind-equivalence checks.
std::vector<uint8_t> oracle_sc_decisions(const CodeSpec& spec,
                                         std::span<const double> channel_llrs,
                                         std::span<const uint32_t> flip_bits = {});

// convenience wrappers
DecodeOutcome sc_decode(const CodeSpec& spec, std::span<const double> channel_llrs);
DecodeOutcome sc_flip_decode(const CodeSpec& spec, std::span<const double> channel_llrs,
                             FlipOptions options = {});
DecodeOutcome scl_decode(const CodeSpec& spec, std::span<const double> channel_llrs,
                         uint32_t list_size);
DecodeOutcome sp_scl_decode(const CodeSpec& spec, std::span<const double> channel_llrs,
                            uint32_t list_size, SpOptions options = {});

}  // namespace polar
