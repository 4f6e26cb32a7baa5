#include "polar/sc_memory.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "polar/schedule.hpp"
#include "polar/transform.hpp"

namespace polar {

void ScMemory::reset(std::span<const double> channel_llrs) {
    const size_t len = channel_llrs.size();
    if (len < 2 || !std::has_single_bit(len))
        throw std::invalid_argument("ScMemory: channel LLR count must be a power of two >= 2");
    block_length_ = uint32_t(len);
    levels_ = std::countr_zero(block_length_);
    llr_.resize(2 * size_t(block_length_) - 1);
    std::copy(channel_llrs.begin(), channel_llrs.end(),
              llr_.begin() + (size_t(block_length_) - 1));
    psum_.assign(size_t(block_length_) - 1, 0);
    decisions_.assign(block_length_, 0);
    scratch_.resize(block_length_ / 2);
    cursor_ = 0;
    decision_pending_ = false;
}

double ScMemory::decision_llr(uint32_t i) {
    if (i != cursor_ || i >= block_length_)
        throw std::logic_error("ScMemory::decision_llr: out-of-schedule request");
    const auto& backend = kernels::active_backend();
    for (int s = llr_stage(i, levels_); s >= 0; --s) {
        const uint32_t w = uint32_t{1} << s;
        const double* in = llr_.data() + (2 * size_t(w) - 1);
        double* out = llr_.data() + (size_t(w) - 1);
        if (i & w)
            backend.g_sweep(in, in + w, psum_.data() + (w - 1), out, w);
        else
            backend.f_sweep(in, in + w, out, w);
        time_steps_ += 1;
        node_visits_ += w;
    }
    decision_pending_ = true;
    return llr_[0];
}

void ScMemory::commit(uint32_t i, uint8_t value) {
    if (i != cursor_ || !decision_pending_)
        throw std::logic_error("ScMemory::commit: out-of-schedule commit");
    decisions_[i] = value & 1;
    cursor_ = i + 1;
    decision_pending_ = false;
    if (i == block_length_ - 1) return;  // all-ones index: nothing to feed forward

    // Fold the new decision together with the sub-block re-encodes held in
    // stages 0..q-1 into the stage-q sums consumed by the next bit.
    const int q = psum_stage(i, levels_);
    scratch_[0] = value & 1;
    uint32_t width = 1;
    for (int s = 0; s < q; ++s, width <<= 1) {
        const uint8_t* prev = psum_.data() + (width - 1);
        for (uint32_t k = 0; k < width; ++k) {
            scratch_[width + k] = scratch_[k];
            scratch_[k] ^= prev[k];
        }
    }
    std::copy(scratch_.begin(), scratch_.begin() + width, psum_.begin() + (width - 1));
}

void ScMemory::rewind(uint32_t resume) {
    if (resume > cursor_)
        throw std::invalid_argument("ScMemory::rewind: resume point ahead of cursor");
    // valid from any later cursor when fixed under the suffix refinement;
    // re-running just the most recent bit is always valid (its commit fed a
    // deeper stage than its own re-read)
    if (cursor_ - resume > 1 && refine_resume(resume, levels_) != resume)
        throw std::invalid_argument("ScMemory::rewind: not a resumable index");
    std::fill(decisions_.begin() + resume, decisions_.end(), 0);
    cursor_ = resume;
    decision_pending_ = false;
}

MidSnapshot ScMemory::snapshot_mid() const {
    const uint32_t mid = block_length_ / 2;
    if (cursor_ != mid) throw std::logic_error("ScMemory::snapshot_mid: cursor not at N/2");
    MidSnapshot snap;
    snap.decision_prefix.assign(decisions_.begin(), decisions_.begin() + mid);
    snap.taken_at = mid;
    return snap;
}

void ScMemory::restore_mid(const MidSnapshot& snapshot) {
    const uint32_t mid = block_length_ / 2;
    if (snapshot.taken_at != mid || snapshot.decision_prefix.size() != mid)
        throw std::logic_error("ScMemory::restore_mid: snapshot does not match this code");
    std::copy(snapshot.decision_prefix.begin(), snapshot.decision_prefix.end(),
              decisions_.begin());
    std::fill(decisions_.begin() + mid, decisions_.end(), 0);
    std::copy(snapshot.decision_prefix.begin(), snapshot.decision_prefix.end(),
              scratch_.begin());
    polar_transform(std::span<uint8_t>(scratch_.data(), mid));
    std::copy(scratch_.begin(), scratch_.begin() + mid, psum_.begin() + (mid - 1));
    cursor_ = mid;
    decision_pending_ = false;
}

void ScMemory::assign_state_from(const ScMemory& other) {
    if (other.block_length_ != block_length_)
        throw std::logic_error("ScMemory::assign_state_from: mismatched block length");
    // stages 0..n-1 only; the channel stage is identical by contract
    std::copy(other.llr_.begin(), other.llr_.begin() + (block_length_ - 1), llr_.begin());
    std::copy(other.psum_.begin(), other.psum_.end(), psum_.begin());
    std::copy(other.decisions_.begin(), other.decisions_.end(), decisions_.begin());
    cursor_ = other.cursor_;
    decision_pending_ = other.decision_pending_;
}

std::span<const double> ScMemory::llr_stage_view(int stage) const {
    const size_t w = size_t{1} << stage;
    return {llr_.data() + (w - 1), w};
}

std::span<const uint8_t> ScMemory::psum_stage_view(int stage) const {
    const size_t w = size_t{1} << stage;
    return {psum_.data() + (w - 1), w};
}

}  // namespace polar
