#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polar/kernels.hpp"

namespace polar {

/// State captured when the cursor reaches the block midpoint: enough to put
/// a path back at bit N/2 without replaying the first half.
struct MidSnapshot {
    std::vector<uint8_t> decision_prefix;  // decisions for bits [0, N/2)
    double metric = 0.0;                   // caller-managed path metric
    uint32_t taken_at = 0;                 // always N/2
};

// Compact successive-cancellation working memory.
//
// LLR slots: 2N-1 doubles, stage s occupying [2^s - 1, 2^(s+1) - 1).  Stage
// n holds the channel LLRs (decoder bit order) and is never rewritten after
// reset.  Partial sums: N-1 bits with the same per-stage offsets for stages
// 0..n-1.  Bits are decoded strictly in index order; decision_llr(i)
// recomputes stages llr_stage(i)..0 and commit(i) folds the decision into
// the deepest partial-sum stage that the next bit will read.
//
// rewind() moves the cursor back without touching any buffer; it is only
// legal for resume points whose required stages are untouched by the bits
// decoded past them, which is exactly what rewind_target() emits.
class ScMemory {
public:
    ScMemory() = default;
    explicit ScMemory(std::span<const double> channel_llrs) { reset(channel_llrs); }

    /// Load channel LLRs (decoder bit order) and start a fresh pass.
    void reset(std::span<const double> channel_llrs);

    uint32_t block_length() const noexcept { return block_length_; }
    int levels() const noexcept { return levels_; }
    uint32_t cursor() const noexcept { return cursor_; }
    const std::vector<uint8_t>& decisions() const noexcept { return decisions_; }

    /// Decision LLR for bit i; requires i == cursor().
    double decision_llr(uint32_t i);

    /// Record the decision for bit i and advance; requires a preceding
    /// decision_llr(i).  The last bit skips the partial-sum update.
    void commit(uint32_t i, uint8_t value);

    /// Move the cursor back to a resume point; no recomputation happens.
    void rewind(uint32_t resume);

    /// Capture the decision prefix at the midpoint; requires cursor == N/2.
    MidSnapshot snapshot_mid() const;

    /// Re-enter the pass at N/2: restores the decision prefix and rebuilds
    /// the stage-(n-1) partial sums by re-encoding it.  Everything decoded
    /// from here on depends only on those sums and the channel stage.
    void restore_mid(const MidSnapshot& snapshot);

    /// Copy decode state (not counters) from another memory built over the
    /// same channel LLRs; used when a list decoder forks a path.
    void assign_state_from(const ScMemory& other);

    // schedule-stage updates and f/g evaluations actually performed
    uint64_t time_steps() const noexcept { return time_steps_; }
    uint64_t node_visits() const noexcept { return node_visits_; }
    void reset_counters() noexcept { time_steps_ = node_visits_ = 0; }

    // read-only views for tests and diagnostics
    std::span<const double> llr_stage_view(int stage) const;
    std::span<const uint8_t> psum_stage_view(int stage) const;

private:
    uint32_t block_length_ = 0;
    int levels_ = 0;
    uint32_t cursor_ = 0;
    bool decision_pending_ = false;
    std::vector<double> llr_;        // 2N-1
    std::vector<uint8_t> psum_;      // N-1
    std::vector<uint8_t> decisions_; // N
    std::vector<uint8_t> scratch_;   // commit workspace, N/2
    uint64_t time_steps_ = 0;
    uint64_t node_visits_ = 0;
};

}  // namespace polar
