#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polar/code_spec.hpp"

namespace polar {

enum class DecoderKind { Sc, ScFlip, Scl, SclSp };
enum class SuccessRule { Payload, Crc };

const char* decoder_name(DecoderKind kind);
const char* success_rule_name(SuccessRule rule);

struct CampaignConfig {
    CodeSpec spec;
    DecoderKind decoder = DecoderKind::Sc;
    uint32_t list_size = 8;
    int max_retries = 8;
    bool partial_rewind = true;
    std::vector<double> ebn0_db;
    uint64_t seed = 1;
    uint64_t min_frame_errors = 100;
    uint64_t max_frames = 1'000'000;
    int workers = 0;  // 0 = hardware concurrency
    SuccessRule success_rule = SuccessRule::Payload;
    std::string info_set_path;  // set when the code was loaded from a file
};

// One simulated SNR point.  Averages follow the per-iteration convention:
// avg_ts_all is total time-steps over total decoding attempts, avg_ts_add is
// additional time-steps over additional attempts (frames that succeeded on
// the first attempt contribute nothing to the additional columns).
struct CampaignRecord {
    double ebn0_db = 0.0;
    uint64_t frames = 0;
    uint64_t frame_errors = 0;
    uint64_t attempts_total = 0;
    uint64_t attempts_additional = 0;
    uint64_t time_steps_total = 0;
    uint64_t time_steps_additional = 0;
    uint64_t node_visits_total = 0;
    uint64_t node_visits_additional = 0;

    double fer() const { return frames ? double(frame_errors) / double(frames) : 0.0; }
    double avg_attempts() const {
        return frames ? double(attempts_total) / double(frames) : 0.0;
    }
    double avg_ts_all() const {
        return attempts_total ? double(time_steps_total) / double(attempts_total) : 0.0;
    }
    double avg_ts_add() const {
        return attempts_additional ? double(time_steps_additional) / double(attempts_additional)
                                   : 0.0;
    }
    double avg_nv_all() const {
        return attempts_total ? double(node_visits_total) / double(attempts_total) : 0.0;
    }
    double avg_nv_add() const {
        return attempts_additional
                   ? double(node_visits_additional) / double(attempts_additional)
                   : 0.0;
    }
};

/// Monte-Carlo FER/complexity sweep over config.ebn0_db.  Per SNR point,
/// frames run until min_frame_errors or max_frames; results are independent
/// of the worker count (per-frame random substreams, chunked stop checks).
std::vector<CampaignRecord> run_campaign(const CampaignConfig& config);

void write_csv(const std::vector<CampaignRecord>& records, std::ostream& out);
std::string csv_string(const std::vector<CampaignRecord>& records);
void write_csv_file(const std::vector<CampaignRecord>& records, const std::string& path);

void write_manifest(const CampaignConfig& config, const std::string& path);

// parsed back from a CSV + manifest pair
struct RunArtifacts {
    std::vector<CampaignRecord> records;
    std::string seed;
    std::string code_line;
    std::string decoder_line;
};
RunArtifacts load_run(const std::string& csv_path);

struct SavingsRow {
    double ebn0_db = 0.0;
    double fer = 0.0;
    double ts_add_with = 0.0, ts_add_without = 0.0, ts_saving_pct = 0.0;
    double nv_add_with = 0.0, nv_add_without = 0.0, nv_saving_pct = 0.0;
};

/// Per-SNR complexity reduction of the partial-rewind run versus the
/// full-restart run.  Throws if the SNR grids, seeds or FER columns differ.
std::vector<SavingsRow> compare_runs(const RunArtifacts& with_pr,
                                     const RunArtifacts& without_pr);

std::string savings_table(const std::vector<SavingsRow>& rows);

}  // namespace polar
