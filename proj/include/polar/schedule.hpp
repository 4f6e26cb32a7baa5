#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

// Bit-index arithmetic behind the successive-cancellation update schedule:
// which LLR/partial-sum stages each bit touches, the grouping of indices by
// their most significant zero bit, and the resume points that make a partial
// rewind of the decoder safe.  Everything here is pure integer math on the
// bit index and the code-length exponent n (N = 2^n).

namespace polar {

/// Deepest LLR stage recomputed when decoding bit i (lowest set bit; n-1 for i=0).
constexpr int llr_stage(uint32_t i, int n) noexcept {
    return i == 0 ? n - 1 : std::countr_zero(i);
}

/// Deepest partial-sum stage rewritten after committing bit i (lowest zero bit).
/// Returns -1 for the all-ones index: the last bit needs no partial-sum update.
constexpr int psum_stage(uint32_t i, int n) noexcept {
    const uint32_t mask = (uint32_t{1} << n) - 1;
    return i == mask ? -1 : std::countr_one(i);
}

/// Group order of index j: n-1 minus the position of its most significant
/// zero bit, or n-1 when j is all ones.  Indices of equal order form one
/// contiguous interval; the group intervals ascend with the order.
constexpr int group_order(uint32_t j, int n) noexcept {
    const uint32_t mask = (uint32_t{1} << n) - 1;
    if (j == mask) return n - 1;
    return n - std::bit_width((~j) & mask);
}

/// Smallest index of the order-p group: p ones followed by n-p zeros.
constexpr uint32_t group_first(int p, int n) noexcept {
    return (uint32_t{1} << n) - (uint32_t{1} << (n - p));
}

struct IndexGroup {
    int order;       // p
    uint32_t first;  // smallest member, the canonical resume point
    uint32_t last;   // largest member
};

/// The group containing index j, with its interval bounds.
constexpr IndexGroup group_of(uint32_t j, int n) noexcept {
    const int p = group_order(j, n);
    const uint32_t first = group_first(p, n);
    const uint32_t last = p < n - 1
        ? (uint32_t{1} << n) - (uint32_t{1} << (n - p - 1)) - 1
        : (uint32_t{1} << n) - 1;
    return {p, first, last};
}

/// Refined resume point for a target j: peel the leading ones-then-zero
/// prefix off the remaining suffix until the suffix starts with a zero bit,
/// accumulating each window's smallest group member.  Fixed points of this
/// map are exactly the indices that can be resumed without recomputation.
constexpr uint32_t refine_resume(uint32_t j, int n) {
    uint32_t resume = 0;
    uint32_t k = j;
    int m = n;
    while (m > 0) {
        const int p = group_order(k, m);
        if (p == 0) break;  // suffix group starts at 0, nothing left to add
        resume += (uint32_t{1} << m) - (uint32_t{1} << (m - p));
        m -= p + 1;
        k = m > 0 ? k & ((uint32_t{1} << m) - 1) : 0;
    }
    return resume;
}

/// One rewind step: where the modification goes and where decoding resumes.
struct RewindPlan {
    uint32_t target;  // bit whose decision is flipped / pruning window shifted
    uint32_t resume;  // bit index decoding restarts from (resume <= target)
};

/// Resume point for rewinding from bit i back to bit j (j < i).  When the two
/// indices fall in distinct groups the answer is j's group start; when they
/// share a group the suffix refinement may move the resume point forward.
/// j's group starting above i's would contradict the ascending intervals.
constexpr RewindPlan rewind_target(uint32_t i, uint32_t j, int n) {
    if (j >= i) throw std::invalid_argument("rewind_target: need j < i");
    const uint32_t zj = group_first(group_order(j, n), n);
    const uint32_t zi = group_first(group_order(i, n), n);
    if (zj > zi) throw std::logic_error("rewind_target: group intervals out of order");
    return {j, zj < zi ? zj : refine_resume(j, n)};
}

/// Combine with the previous attempt's plan: a resume point beyond the last
/// one would keep that attempt's modification in the re-decoded region, so
/// fall back to the earlier point and let re-decoding undo it.
constexpr RewindPlan resolve_repeat(RewindPlan current, const RewindPlan& previous) noexcept {
    if (current.resume > previous.resume) current.resume = previous.resume;
    return current;
}

/// Schedule stages consumed by decoding bits [first, N): 2N-2 for a full pass.
constexpr uint64_t pass_time_steps(uint32_t first, uint32_t block_length) noexcept {
    const int n = std::countr_zero(block_length);
    uint64_t total = 0;
    for (uint32_t i = first; i < block_length; ++i)
        total += uint64_t(llr_stage(i, n)) + 1;
    return total;
}

/// f/g evaluations performed by decoding bits [first, N): N*log2(N) for a full pass.
constexpr uint64_t pass_node_visits(uint32_t first, uint32_t block_length) noexcept {
    const int n = std::countr_zero(block_length);
    uint64_t total = 0;
    for (uint32_t i = first; i < block_length; ++i)
        total += (uint64_t{1} << (llr_stage(i, n) + 1)) - 1;
    return total;
}

}  // namespace polar
