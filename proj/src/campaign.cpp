#include "polar/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polar/channel.hpp"
#include "polar/decoders.hpp"

namespace polar {

const char* decoder_name(DecoderKind kind) {
    switch (kind) {
        case DecoderKind::Sc: return "sc";
        case DecoderKind::ScFlip: return "sc-flip";
        case DecoderKind::Scl: return "scl";
        case DecoderKind::SclSp: return "scl-sp";
    }
    return "?";
}

const char* success_rule_name(SuccessRule rule) {
    return rule == SuccessRule::Payload ? "payload" : "crc";
}

namespace {

constexpr uint64_t kChunkFrames = 512;  // stop-rule granularity, worker-count independent

struct Accumulator {
    uint64_t frames = 0;
    uint64_t frame_errors = 0;
    uint64_t attempts_total = 0;
    uint64_t attempts_additional = 0;
    uint64_t ts_total = 0, ts_add = 0;
    uint64_t nv_total = 0, nv_add = 0;

    void add(const Accumulator& other) {
        frames += other.frames;
        frame_errors += other.frame_errors;
        attempts_total += other.attempts_total;
        attempts_additional += other.attempts_additional;
        ts_total += other.ts_total;
        ts_add += other.ts_add;
        nv_total += other.nv_total;
        nv_add += other.nv_add;
    }
};

class FrameWorker {
public:
    FrameWorker(const CampaignConfig& config)
        : config_(config), sc_(config.spec), flip_(config.spec, flip_options()) {
        if (config.decoder == DecoderKind::Scl || config.decoder == DecoderKind::SclSp)
            scl_ = std::make_unique<SclDecoder>(config.spec, config.list_size);
    }

    void run_frame(uint64_t point_seed, uint64_t frame, double sigma, Accumulator& acc) {
        const CodeSpec& spec = config_.spec;
        FrameRng rng(point_seed, frame);
        const auto payload = random_payload(spec.payload_bits, rng);
        const auto codeword = encode(frame_from_payload(payload, spec), spec);
        const auto llrs = transmit(codeword, sigma, rng);

        DecodeOutcome outcome;
        switch (config_.decoder) {
            case DecoderKind::Sc: outcome = sc_.decode(llrs); break;
            case DecoderKind::ScFlip: outcome = flip_.decode(llrs); break;
            case DecoderKind::Scl: outcome = scl_->decode(llrs); break;
            case DecoderKind::SclSp: outcome = scl_->decode_shifted(llrs, sp_options()); break;
        }

        const bool ok = config_.success_rule == SuccessRule::Crc
                            ? outcome.success
                            : outcome.payload == payload;
        acc.frames += 1;
        acc.frame_errors += ok ? 0 : 1;
        acc.attempts_total += uint64_t(outcome.attempts);
        acc.attempts_additional += uint64_t(outcome.attempts) - 1;
        acc.ts_total += outcome.time_steps_total;
        acc.ts_add += outcome.time_steps_additional;
        acc.nv_total += outcome.node_visits_total;
        acc.nv_add += outcome.node_visits_additional;
    }

private:
    FlipOptions flip_options() const {
        FlipOptions o;
        o.max_retries = config_.max_retries;
        o.partial_rewind = config_.partial_rewind;
        return o;
    }
    SpOptions sp_options() const {
        SpOptions o;
        o.max_retries = config_.max_retries;
        o.partial_rewind = config_.partial_rewind;
        return o;
    }

    const CampaignConfig& config_;
    ScDecoder sc_;
    ScFlipDecoder flip_;
    std::unique_ptr<SclDecoder> scl_;
};

uint64_t point_seed_for(uint64_t seed, size_t point_index) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ull * (point_index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

void validate(const CampaignConfig& config) {
    if (config.spec.payload_bits == 0)
        throw std::invalid_argument("campaign: payload of zero bits is not simulatable");
    if (config.ebn0_db.empty()) throw std::invalid_argument("campaign: no SNR points");
    if (config.max_frames == 0) throw std::invalid_argument("campaign: max_frames must be > 0");
    const bool retry = config.decoder == DecoderKind::ScFlip || config.decoder == DecoderKind::SclSp;
    if (retry && config.spec.crc_bits == 0)
        throw std::invalid_argument("campaign: retry decoders need a CRC");
}

}  // namespace

std::vector<CampaignRecord> run_campaign(const CampaignConfig& config) {
    validate(config);
    int workers = config.workers;
    if (workers <= 0) workers = int(std::max(1u, std::thread::hardware_concurrency()));

    std::vector<CampaignRecord> records;
    for (size_t point = 0; point < config.ebn0_db.size(); ++point) {
        const double ebn0 = config.ebn0_db[point];
        const double rate = double(config.spec.payload_bits) / config.spec.block_length;
        const double sigma = awgn_sigma(ebn0, rate);
        const uint64_t point_seed = point_seed_for(config.seed, point);

        Accumulator total;
        uint64_t next_frame = 0;
        while (total.frame_errors < config.min_frame_errors && next_frame < config.max_frames) {
            const uint64_t chunk =
                std::min<uint64_t>(kChunkFrames, config.max_frames - next_frame);
            std::vector<Accumulator> partial(static_cast<size_t>(workers));
            std::atomic<uint64_t> cursor{0};
            auto body = [&](int w) {
                FrameWorker worker(config);
                uint64_t f;
                while ((f = cursor.fetch_add(1)) < chunk)
                    worker.run_frame(point_seed, next_frame + f, sigma, partial[size_t(w)]);
            };
            if (workers == 1) {
                body(0);
            } else {
                std::vector<std::thread> pool;
                for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
                for (auto& t : pool) t.join();
            }
            for (const auto& p : partial) total.add(p);
            next_frame += chunk;
        }

        CampaignRecord rec;
        rec.ebn0_db = ebn0;
        rec.frames = total.frames;
        rec.frame_errors = total.frame_errors;
        rec.attempts_total = total.attempts_total;
        rec.attempts_additional = total.attempts_additional;
        rec.time_steps_total = total.ts_total;
        rec.time_steps_additional = total.ts_add;
        rec.node_visits_total = total.nv_total;
        rec.node_visits_additional = total.nv_add;
        records.push_back(rec);
    }
    return records;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.8g", v);
    return buf;
}

}  // namespace

void write_csv(const std::vector<CampaignRecord>& records, std::ostream& out) {
    out << "ebn0_db,frames,frame_errors,fer,avg_attempts,avg_ts_all,avg_ts_add,"
           "avg_nv_all,avg_nv_add\n";
    for (const auto& r : records) {
        out << format_double(r.ebn0_db) << ',' << r.frames << ',' << r.frame_errors << ','
            << format_double(r.fer()) << ',' << format_double(r.avg_attempts()) << ','
            << format_double(r.avg_ts_all()) << ',' << format_double(r.avg_ts_add()) << ','
            << format_double(r.avg_nv_all()) << ',' << format_double(r.avg_nv_add()) << '\n';
    }
}

std::string csv_string(const std::vector<CampaignRecord>& records) {
    std::ostringstream out;
    write_csv(records, out);
    return out.str();
}

void write_csv_file(const std::vector<CampaignRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    write_csv(records, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_manifest(const CampaignConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << "code=N" << config.spec.block_length << ",K" << config.spec.payload_bits << ",crc"
        << config.spec.crc_bits;
    if (config.spec.crc_bits) {
        char poly[16];
        std::snprintf(poly, sizeof(poly), "0x%X", config.spec.crc_poly);
        out << ",poly" << poly;
    }
    out << "\n";
    if (config.info_set_path.empty())
        out << "design_snr_db=" << format_double(config.spec.design_snr_db) << "\n";
    else
        out << "info_set=" << config.info_set_path << "\n";
    out << "decoder=" << decoder_name(config.decoder);
    if (config.decoder == DecoderKind::Scl || config.decoder == DecoderKind::SclSp)
        out << ",L" << config.list_size;
    if (config.decoder == DecoderKind::ScFlip || config.decoder == DecoderKind::SclSp)
        out << ",T" << config.max_retries << ",pr=" << (config.partial_rewind ? "on" : "off");
    out << "\n";
    out << "seed=" << config.seed << "\n";
    out << "snr=";
    for (size_t p = 0; p < config.ebn0_db.size(); ++p)
        out << (p ? " " : "") << format_double(config.ebn0_db[p]);
    out << "\n";
    out << "stop=min_errors:" << config.min_frame_errors << ",max_frames:" << config.max_frames
        << "\n";
    out << "success=" << success_rule_name(config.success_rule) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

RunArtifacts load_run(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open csv: " + csv_path);
    RunArtifacts run;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + csv_path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        CampaignRecord r;
        double fer, avg_att, ts_all, ts_add, nv_all, nv_add;
        if (!(fields >> r.ebn0_db >> r.frames >> r.frame_errors >> fer >> avg_att >> ts_all >>
              ts_add >> nv_all >> nv_add))
            throw std::runtime_error("malformed csv row in " + csv_path + ": " + line);
        // reconstruct the integer tallies the averages were computed from
        r.attempts_total = uint64_t(std::llround(avg_att * double(r.frames)));
        r.attempts_additional = r.attempts_total - r.frames;
        r.time_steps_total = uint64_t(std::llround(ts_all * double(r.attempts_total)));
        r.time_steps_additional = uint64_t(std::llround(ts_add * double(r.attempts_additional)));
        r.node_visits_total = uint64_t(std::llround(nv_all * double(r.attempts_total)));
        r.node_visits_additional = uint64_t(std::llround(nv_add * double(r.attempts_additional)));
        run.records.push_back(r);
    }

    std::ifstream manifest(csv_path + ".manifest");
    if (manifest) {
        while (std::getline(manifest, line)) {
            if (line.rfind("seed=", 0) == 0) run.seed = line.substr(5);
            if (line.rfind("code=", 0) == 0) run.code_line = line.substr(5);
            if (line.rfind("decoder=", 0) == 0) run.decoder_line = line.substr(8);
        }
    }
    return run;
}

std::vector<SavingsRow> compare_runs(const RunArtifacts& with_pr,
                                     const RunArtifacts& without_pr) {
    if (with_pr.records.size() != without_pr.records.size())
        throw std::invalid_argument("compare: SNR grids differ in length");
    if (!with_pr.seed.empty() && !without_pr.seed.empty() && with_pr.seed != without_pr.seed)
        throw std::invalid_argument("compare: runs used different seeds");
    if (!with_pr.code_line.empty() && !without_pr.code_line.empty() &&
        with_pr.code_line != without_pr.code_line)
        throw std::invalid_argument("compare: runs used different codes");

    std::vector<SavingsRow> rows;
    for (size_t p = 0; p < with_pr.records.size(); ++p) {
        const auto& a = with_pr.records[p];
        const auto& b = without_pr.records[p];
        if (a.ebn0_db != b.ebn0_db)
            throw std::invalid_argument("compare: SNR grids differ");
        if (a.frames != b.frames || a.frame_errors != b.frame_errors)
            throw std::invalid_argument(
                "compare: FER columns are not identical; runs are not seed-matched");
        SavingsRow row;
        row.ebn0_db = a.ebn0_db;
        row.fer = a.fer();
        row.ts_add_with = a.avg_ts_add();
        row.ts_add_without = b.avg_ts_add();
        row.nv_add_with = a.avg_nv_add();
        row.nv_add_without = b.avg_nv_add();
        row.ts_saving_pct =
            row.ts_add_without > 0 ? 100.0 * (1.0 - row.ts_add_with / row.ts_add_without) : 0.0;
        row.nv_saving_pct =
            row.nv_add_without > 0 ? 100.0 * (1.0 - row.nv_add_with / row.nv_add_without) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::string savings_table(const std::vector<SavingsRow>& rows) {
    std::ostringstream out;
    out << "ebn0_db fer ts_add_without ts_add_with ts_saving_pct "
           "nv_add_without nv_add_with nv_saving_pct\n";
    for (const auto& r : rows) {
        out << format_double(r.ebn0_db) << ' ' << format_double(r.fer) << ' '
            << format_double(r.ts_add_without) << ' ' << format_double(r.ts_add_with) << ' '
            << format_double(r.ts_saving_pct) << ' ' << format_double(r.nv_add_without) << ' '
            << format_double(r.nv_add_with) << ' ' << format_double(r.nv_saving_pct) << '\n';
    }
    return out.str();
}

}  // namespace polar
