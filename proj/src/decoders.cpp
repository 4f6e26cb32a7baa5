#include "polar/decoders.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "polar/kernels.hpp"
#include "polar/schedule.hpp"
#include "polar/transform.hpp"

namespace polar {

std::vector<double> to_decoder_order(const CodeSpec& spec,
                                     std::span<const double> channel_llrs) {
    if (channel_llrs.size() != spec.block_length)
        throw std::invalid_argument("channel LLR count does not match block length");
    std::vector<double> out(spec.block_length);
    for (uint32_t k = 0; k < spec.block_length; ++k)
        out[k] = channel_llrs[bit_reverse(k, spec.levels)];
    return out;
}

std::vector<uint32_t> rank_by_ascending_score(
    const std::vector<std::pair<uint32_t, double>>& scored) {
    std::vector<std::pair<uint32_t, double>> sorted = scored;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    std::vector<uint32_t> targets(sorted.size());
    for (size_t t = 0; t < sorted.size(); ++t) targets[t] = sorted[t].first;
    return targets;
}

// ---------------------------------------------------------------------------

DecodeOutcome ScDecoder::decode(std::span<const double> channel_llrs) {
    reordered_ = to_decoder_order(*spec_, channel_llrs);
    mem_.reset(reordered_);
    mem_.reset_counters();
    const uint32_t N = spec_->block_length;
    for (uint32_t i = 0; i < N; ++i) {
        const double llr = mem_.decision_llr(i);
        mem_.commit(i, spec_->is_info[i] ? hard_decision(llr) : 0);
    }
    DecodeOutcome out;
    out.payload = extract_payload(mem_.decisions(), *spec_);
    out.success = crc_check(info_word(mem_.decisions(), *spec_), *spec_);
    out.time_steps_total = mem_.time_steps();
    out.node_visits_total = mem_.node_visits();
    out.trace.push_back({0, 0, out.success});
    return out;
}

// ---------------------------------------------------------------------------

DecodeOutcome ScFlipDecoder::decode(std::span<const double> channel_llrs) {
    const uint32_t N = spec_->block_length;
    const int n = spec_->levels;
    reordered_ = to_decoder_order(*spec_, channel_llrs);
    mem_.reset(reordered_);
    mem_.reset_counters();
    scores_.clear();

    for (uint32_t i = 0; i < N; ++i) {
        const double llr = mem_.decision_llr(i);
        if (spec_->is_info[i]) scores_.emplace_back(i, std::fabs(llr));
        mem_.commit(i, spec_->is_info[i] ? hard_decision(llr) : 0);
    }
    const uint64_t first_ts = mem_.time_steps();
    const uint64_t first_nv = mem_.node_visits();

    DecodeOutcome out;
    out.success = crc_check(info_word(mem_.decisions(), *spec_), *spec_);
    out.trace.push_back({0, 0, out.success});
    if (out.success) {
        out.payload = extract_payload(mem_.decisions(), *spec_);
        out.time_steps_total = first_ts;
        out.node_visits_total = first_nv;
        return out;
    }

    first_decisions_ = mem_.decisions();
    std::vector<uint32_t> targets =
        options_.ranker ? options_.ranker(scores_) : rank_by_ascending_score(scores_);
    if (targets.size() > size_t(std::max(options_.max_retries, 0)))
        targets.resize(size_t(std::max(options_.max_retries, 0)));

    std::optional<RewindPlan> previous;
    for (uint32_t flip_bit : targets) {
        // the pass is complete, so flipping the last bit re-decodes it alone
        RewindPlan plan = flip_bit == N - 1 ? RewindPlan{flip_bit, flip_bit}
                                            : rewind_target(N - 1, flip_bit, n);
        if (previous) plan = resolve_repeat(plan, *previous);
        previous = plan;
        const uint32_t resume = options_.partial_rewind ? plan.resume : 0;
        mem_.rewind(resume);
        for (uint32_t i = resume; i < N; ++i) {
            const double llr = mem_.decision_llr(i);
            uint8_t value = spec_->is_info[i] ? hard_decision(llr) : 0;
            if (i == flip_bit) value ^= 1;
            mem_.commit(i, value);
        }
        ++out.attempts;
        const bool ok = crc_check(info_word(mem_.decisions(), *spec_), *spec_);
        out.trace.push_back({flip_bit, resume, ok});
        if (ok) {
            out.success = true;
            out.payload = extract_payload(mem_.decisions(), *spec_);
            break;
        }
    }
    if (!out.success) out.payload = extract_payload(first_decisions_, *spec_);

    out.time_steps_total = mem_.time_steps();
    out.node_visits_total = mem_.node_visits();
    out.time_steps_additional = out.time_steps_total - first_ts;
    out.node_visits_additional = out.node_visits_total - first_nv;
    return out;
}

// ---------------------------------------------------------------------------

SclDecoder::SclDecoder(const CodeSpec& spec, uint32_t list_size)
    : spec_(&spec), list_size_(list_size) {
    if (list_size_ < 1 || !std::has_single_bit(list_size_))
        throw std::invalid_argument("list size must be a power of two >= 1");
    slots_.resize(list_size_);
    path_llr_.resize(list_size_);
    snapshot_alive_.resize(list_size_);
    snapshots_.resize(list_size_);
}

void SclDecoder::start_frame(std::span<const double> channel_llrs) {
    reordered_ = to_decoder_order(*spec_, channel_llrs);
    for (auto& slot : slots_) {
        slot.mem.reset(reordered_);
        slot.mem.reset_counters();
        slot.alive = false;
        slot.metric = 0.0;
    }
    slots_[0].alive = true;
    have_snapshot_ = false;
}

void SclDecoder::reset_paths() {
    for (auto& slot : slots_) {
        slot.mem.rewind(0);  // channel stage is intact, so this is a fresh pass
        slot.alive = false;
        slot.metric = 0.0;
    }
    slots_[0].alive = true;
}

void SclDecoder::restore_midpoint() {
    for (uint32_t s = 0; s < list_size_; ++s) {
        slots_[s].alive = snapshot_alive_[s] != 0;
        if (slots_[s].alive) {
            slots_[s].mem.restore_mid(snapshots_[s]);
            slots_[s].metric = snapshots_[s].metric;
        }
    }
}

uint64_t SclDecoder::total_node_visits() const {
    uint64_t total = 0;
    for (const auto& slot : slots_) total += slot.mem.node_visits();
    return total;
}

SclDecoder::PassResult SclDecoder::run_pass(uint32_t from, int64_t shift_bit, bool record) {
    const uint32_t N = spec_->block_length;
    const int n = spec_->levels;
    const uint64_t nv_start = total_node_visits();
    if (record) margins_.clear();

    struct Candidate {
        double metric;
        uint32_t parent;
        uint8_t bit;
    };
    struct Kept {
        int count;
        uint8_t bit[2];
        double metric[2];
    };
    std::vector<Candidate> cands;
    cands.reserve(2 * list_size_);
    std::vector<Kept> kept(list_size_);
    std::vector<uint32_t> free_slots;
    free_slots.reserve(list_size_);
    std::vector<uint8_t> next_alive(list_size_);

    PassResult result;
    for (uint32_t i = from; i < N; ++i) {
        result.time_steps += uint64_t(llr_stage(i, n)) + 1;  // paths advance in lockstep
        for (uint32_t s = 0; s < list_size_; ++s)
            if (slots_[s].alive) path_llr_[s] = slots_[s].mem.decision_llr(i);

        if (!spec_->is_info[i]) {
            for (uint32_t s = 0; s < list_size_; ++s) {
                if (!slots_[s].alive) continue;
                if (path_llr_[s] < 0.0) slots_[s].metric -= path_llr_[s];
                slots_[s].mem.commit(i, 0);
            }
        } else {
            cands.clear();
            for (uint32_t s = 0; s < list_size_; ++s) {
                if (!slots_[s].alive) continue;
                const double mag = std::fabs(path_llr_[s]);
                const uint8_t natural = hard_decision(path_llr_[s]);
                cands.push_back({slots_[s].metric, s, natural});
                cands.push_back({slots_[s].metric + mag, s, uint8_t(natural ^ 1)});
            }
            size_t keep_from = 0, keep_to = cands.size();
            if (cands.size() > list_size_) {
                std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
                    if (a.metric != b.metric) return a.metric < b.metric;
                    if (a.parent != b.parent) return a.parent < b.parent;
                    return a.bit < b.bit;
                });
                // shifted pruning keeps the half that would normally be discarded
                keep_from = (shift_bit == int64_t(i)) ? list_size_ : 0;
                keep_to = keep_from + list_size_;
            }

            // survivors per parent slot; only alive parents produced candidates
            for (auto& k : kept) k.count = 0;
            for (size_t c = keep_from; c < keep_to; ++c) {
                Kept& k = kept[cands[c].parent];
                k.bit[k.count] = cands[c].bit;
                k.metric[k.count] = cands[c].metric;
                ++k.count;
            }
            for (uint32_t s = 0; s < list_size_; ++s) {
                if (kept[s].count == 2 && kept[s].bit[0] > kept[s].bit[1]) {
                    std::swap(kept[s].bit[0], kept[s].bit[1]);
                    std::swap(kept[s].metric[0], kept[s].metric[1]);
                }
            }
            free_slots.clear();
            for (uint32_t s = 0; s < list_size_; ++s)
                if (!slots_[s].alive || kept[s].count == 0) free_slots.push_back(s);

            // clone-before-commit: the lower-bit child keeps its parent's
            // slot, the other child lands in the lowest free slot
            std::fill(next_alive.begin(), next_alive.end(), uint8_t{0});
            double margin = 0.0;
            bool margin_set = false;
            size_t next_free = 0;
            for (uint32_t s = 0; s < list_size_; ++s) {
                if (kept[s].count == 0) continue;
                if (kept[s].count == 2) {
                    const uint32_t t = free_slots[next_free++];
                    slots_[t].mem.assign_state_from(slots_[s].mem);
                    slots_[t].mem.commit(i, kept[s].bit[1]);
                    slots_[t].metric = kept[s].metric[1];
                    next_alive[t] = 1;
                }
                slots_[s].mem.commit(i, kept[s].bit[0]);
                slots_[s].metric = kept[s].metric[0];
                next_alive[s] = 1;
                if (!margin_set || std::fabs(path_llr_[s]) < margin) {
                    margin = std::fabs(path_llr_[s]);
                    margin_set = true;
                }
            }
            for (uint32_t s = 0; s < list_size_; ++s) slots_[s].alive = next_alive[s] != 0;
            if (record) margins_.emplace_back(i, margin);
        }

        if (record && i == N / 2 - 1) {
            for (uint32_t s = 0; s < list_size_; ++s) {
                snapshot_alive_[s] = slots_[s].alive ? 1 : 0;
                if (slots_[s].alive) {
                    snapshots_[s] = slots_[s].mem.snapshot_mid();
                    snapshots_[s].metric = slots_[s].metric;
                }
            }
            have_snapshot_ = true;
        }
    }

    int best = -1, best_crc = -1;
    for (uint32_t s = 0; s < list_size_; ++s) {
        if (!slots_[s].alive) continue;
        if (best < 0 || slots_[s].metric < slots_[best].metric) best = int(s);
        if (crc_check(info_word(slots_[s].mem.decisions(), *spec_), *spec_) &&
            (best_crc < 0 || slots_[s].metric < slots_[best_crc].metric))
            best_crc = int(s);
    }
    result.winner = best_crc >= 0 ? best_crc : best;
    result.crc_ok = best_crc >= 0;
    result.node_visits = total_node_visits() - nv_start;
    return result;
}

DecodeOutcome SclDecoder::outcome_from(const PassResult& pass) const {
    DecodeOutcome out;
    out.success = pass.crc_ok;
    out.payload = extract_payload(slots_[pass.winner].mem.decisions(), *spec_);
    return out;
}

DecodeOutcome SclDecoder::decode(std::span<const double> channel_llrs) {
    start_frame(channel_llrs);
    const PassResult pass = run_pass(0, -1, false);
    DecodeOutcome out = outcome_from(pass);
    out.time_steps_total = pass.time_steps;
    out.node_visits_total = pass.node_visits;
    out.trace.push_back({0, 0, pass.crc_ok});
    return out;
}

DecodeOutcome SclDecoder::decode_shifted(std::span<const double> channel_llrs,
                                         const SpOptions& options) {
    const uint32_t N = spec_->block_length;
    start_frame(channel_llrs);
    const PassResult first = run_pass(0, -1, true);

    DecodeOutcome out = outcome_from(first);
    out.time_steps_total = first.time_steps;
    out.node_visits_total = first.node_visits;
    out.trace.push_back({0, 0, first.crc_ok});
    if (first.crc_ok) return out;

    const std::vector<uint8_t> fallback = out.payload;
    std::vector<uint32_t> targets =
        options.ranker ? options.ranker(margins_) : rank_by_ascending_score(margins_);
    if (targets.size() > size_t(std::max(options.max_retries, 0)))
        targets.resize(size_t(std::max(options.max_retries, 0)));

    for (uint32_t shift_bit : targets) {
        // resume points are restricted to {0, N/2}: a target in the lower
        // half groups to 0, anything else re-enters from the midpoint state
        const bool use_mid = options.partial_rewind && shift_bit >= N / 2 && have_snapshot_;
        const uint32_t resume = use_mid ? N / 2 : 0;
        if (use_mid)
            restore_midpoint();
        else
            reset_paths();
        const PassResult retry = run_pass(resume, int64_t(shift_bit), false);
        ++out.attempts;
        out.time_steps_total += retry.time_steps;
        out.time_steps_additional += retry.time_steps;
        out.node_visits_total += retry.node_visits;
        out.node_visits_additional += retry.node_visits;
        out.trace.push_back({shift_bit, resume, retry.crc_ok});
        if (retry.crc_ok) {
            out.success = true;
            out.payload = extract_payload(slots_[retry.winner].mem.decisions(), *spec_);
            return out;
        }
    }
    out.success = false;
    out.payload = fallback;
    return out;
}

std::vector<SclDecoder::PathReport> SclDecoder::last_list() const {
    std::vector<PathReport> report;
    for (const auto& slot : slots_)
        if (slot.alive) report.push_back({slot.metric, slot.mem.decisions()});
    return report;
}

// ---------------------------------------------------------------------------

FullScDecoder::FullScDecoder(std::span<const double> decoder_order_llrs) {
    const size_t len = decoder_order_llrs.size();
    if (len < 2 || !std::has_single_bit(len))
        throw std::invalid_argument("FullScDecoder: LLR count must be a power of two >= 2");
    block_length_ = uint32_t(len);
    levels_ = std::countr_zero(block_length_);
    llr_.assign(size_t(levels_) + 1, std::vector<double>(block_length_, 0.0));
    llr_[levels_].assign(decoder_order_llrs.begin(), decoder_order_llrs.end());
    decisions_.assign(block_length_, 0);
    scratch_.resize(block_length_);
}

double FullScDecoder::decision_llr(uint32_t i) {
    if (i != cursor_ || i >= block_length_)
        throw std::logic_error("FullScDecoder::decision_llr: out-of-schedule request");
    for (int s = llr_stage(i, levels_); s >= 0; --s) {
        const uint32_t w = uint32_t{1} << s;
        const uint32_t out_base = (i >> s) << s;
        const uint32_t in_base = (i >> (s + 1)) << (s + 1);
        const double* top = llr_[s + 1].data() + in_base;
        double* out = llr_[s].data() + out_base;
        if (i & w) {
            std::copy(decisions_.begin() + in_base, decisions_.begin() + in_base + w,
                      scratch_.begin());
            polar_transform(std::span<uint8_t>(scratch_.data(), w));
            for (uint32_t k = 0; k < w; ++k)
                out[k] = kernels::g_node(top[k], top[k + w], scratch_[k]);
        } else {
            for (uint32_t k = 0; k < w; ++k) out[k] = kernels::f_node(top[k], top[k + w]);
        }
    }
    return llr_[0][i];
}

void FullScDecoder::commit(uint32_t i, uint8_t value) {
    if (i != cursor_) throw std::logic_error("FullScDecoder::commit: out-of-schedule commit");
    decisions_[i] = value & 1;
    cursor_ = i + 1;
}

void FullScDecoder::rewind(uint32_t resume) {
    if (resume > cursor_)
        throw std::invalid_argument("FullScDecoder::rewind: resume point ahead of cursor");
    std::fill(decisions_.begin() + resume, decisions_.end(), 0);
    cursor_ = resume;
}

std::vector<uint8_t> oracle_sc_decisions(const CodeSpec& spec,
                                         std::span<const double> channel_llrs,
                                         std::span<const uint32_t> flip_bits) {
    FullScDecoder full(to_decoder_order(spec, channel_llrs));
    for (uint32_t i = 0; i < spec.block_length; ++i) {
        const double llr = full.decision_llr(i);
        uint8_t value = spec.is_info[i] ? hard_decision(llr) : 0;
        if (std::find(flip_bits.begin(), flip_bits.end(), i) != flip_bits.end()) value ^= 1;
        full.commit(i, value);
    }
    return full.decisions();
}

// ---------------------------------------------------------------------------

DecodeOutcome sc_decode(const CodeSpec& spec, std::span<const double> channel_llrs) {
    return ScDecoder(spec).decode(channel_llrs);
}

DecodeOutcome sc_flip_decode(const CodeSpec& spec, std::span<const double> channel_llrs,
                             FlipOptions options) {
    return ScFlipDecoder(spec, std::move(options)).decode(channel_llrs);
}

DecodeOutcome scl_decode(const CodeSpec& spec, std::span<const double> channel_llrs,
                         uint32_t list_size) {
    return SclDecoder(spec, list_size).decode(channel_llrs);
}

DecodeOutcome sp_scl_decode(const CodeSpec& spec, std::span<const double> channel_llrs,
                            uint32_t list_size, SpOptions options) {
    return SclDecoder(spec, list_size).decode_shifted(channel_llrs, options);
}

}  // namespace polar
