// polarsim: polar-code construction, single-frame decoding, Monte-Carlo
// FER/complexity campaigns, and partial-rewind savings reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polar/campaign.hpp"
#include "polar/channel.hpp"
#include "polar/code_spec.hpp"
#include "polar/decoders.hpp"
#include "polar/kernels.hpp"
#include "polar/schedule.hpp"

namespace {

struct CodeArgs {
    uint32_t block_length = 512;
    uint32_t payload_bits = 256;
    std::string crc = "";  // "<hexpoly>:<bits>"
    double design_snr_db = 2.0;
    std::string info_set_path;
};

void add_code_options(CLI::App* cmd, CodeArgs& args) {
    cmd->add_option("--n", args.block_length, "block length N (power of two)");
    cmd->add_option("--k", args.payload_bits, "payload bits K (CRC not included)");
    cmd->add_option("--crc", args.crc, "CRC as <hexpoly>:<bits>, e.g. 0xC06:12");
    cmd->add_option("--design-snr", args.design_snr_db, "construction design Eb/N0 in dB");
    cmd->add_option("--info-set", args.info_set_path,
                    "load the information set from a file instead of constructing it");
}

void parse_crc(const std::string& text, uint32_t& poly, uint32_t& bits) {
    poly = 0;
    bits = 0;
    if (text.empty() || text == "0" || text == "none") return;
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--crc", "expected <hexpoly>:<bits>");
    try {
        poly = uint32_t(std::stoul(text.substr(0, colon), nullptr, 16));
        bits = uint32_t(std::stoul(text.substr(colon + 1)));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--crc", "expected <hexpoly>:<bits>");
    }
    if (bits == 0 || bits > 32) throw CLI::ValidationError("--crc", "bits must be in [1, 32]");
}

polar::CodeSpec build_spec(const CodeArgs& args) {
    uint32_t poly = 0, bits = 0;
    parse_crc(args.crc, poly, bits);
    if (!args.info_set_path.empty())
        return polar::load_info_set(args.info_set_path, bits, poly);
    return polar::construct(args.block_length, args.payload_bits, bits, poly,
                            args.design_snr_db);
}

std::vector<double> expand_snr(const std::vector<std::string>& items) {
    std::vector<double> points;
    for (const auto& item : items) {
        const auto c1 = item.find(':');
        if (c1 == std::string::npos) {
            points.push_back(std::stod(item));
            continue;
        }
        const auto c2 = item.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw CLI::ValidationError("--snr", "range is <start>:<stop>:<step>");
        const double start = std::stod(item.substr(0, c1));
        const double stop = std::stod(item.substr(c1 + 1, c2 - c1 - 1));
        const double step = std::stod(item.substr(c2 + 1));
        if (step <= 0) throw CLI::ValidationError("--snr", "step must be positive");
        for (double v = start; v <= stop + 1e-9; v += step) points.push_back(v);
    }
    return points;
}

std::vector<double> read_llr_file(const std::string& path, const std::string& format,
                                  uint32_t expected) {
    std::vector<double> llrs;
    if (format == "f64le") {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open LLR file: " + path);
        double v;
        while (in.read(reinterpret_cast<char*>(&v), sizeof(v))) llrs.push_back(v);
    } else {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open LLR file: " + path);
        double v;
        while (in >> v) llrs.push_back(v);
    }
    if (llrs.size() != expected) {
        std::ostringstream msg;
        msg << "LLR file holds " << llrs.size() << " values, code needs " << expected;
        throw std::runtime_error(msg.str());
    }
    return llrs;
}

int run_tables(int exponent, const std::string& out_path) {
    std::ostringstream out;
    out << "index,llr_stage,psum_stage,group_order,group_first,group_last\n";
    const uint32_t length = uint32_t{1} << exponent;
    for (uint32_t i = 0; i < length; ++i) {
        const auto group = polar::group_of(i, exponent);
        out << i << ',' << polar::llr_stage(i, exponent) << ','
            << polar::psum_stage(i, exponent) << ',' << group.order << ',' << group.first
            << ',' << group.last << '\n';
    }
    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream file(out_path);
        file << out.str();
        if (!file) throw std::runtime_error("cannot write " + out_path);
    }
    return 0;
}

int run_decode_one(const polar::CodeSpec& spec, const std::string& decoder,
                   const std::vector<double>& llrs, uint32_t list_size, int max_retries,
                   bool pr) {
    polar::DecodeOutcome outcome;
    if (decoder == "sc") {
        outcome = polar::sc_decode(spec, llrs);
    } else if (decoder == "sc-flip") {
        polar::FlipOptions opts;
        opts.max_retries = max_retries;
        opts.partial_rewind = pr;
        outcome = polar::sc_flip_decode(spec, llrs, opts);
    } else if (decoder == "scl") {
        outcome = polar::scl_decode(spec, llrs, list_size);
    } else {
        polar::SpOptions opts;
        opts.max_retries = max_retries;
        opts.partial_rewind = pr;
        outcome = polar::sp_scl_decode(spec, llrs, list_size, opts);
    }

    std::cout << "decoder=" << decoder << "\n";
    std::cout << "success=" << (outcome.success ? "yes" : "no") << "\n";
    std::cout << "attempts=" << outcome.attempts << "\n";
    for (size_t t = 0; t < outcome.trace.size(); ++t) {
        const auto& a = outcome.trace[t];
        std::cout << "attempt " << (t + 1) << ": ";
        if (t == 0)
            std::cout << "first pass";
        else
            std::cout << "target=" << a.target << " resume=" << a.resume;
        std::cout << " crc=" << (a.crc_pass ? "pass" : "fail") << "\n";
    }
    std::cout << "time_steps total=" << outcome.time_steps_total
              << " additional=" << outcome.time_steps_additional << "\n";
    std::cout << "node_visits total=" << outcome.node_visits_total
              << " additional=" << outcome.node_visits_additional << "\n";
    std::cout << "payload=";
    for (uint8_t b : outcome.payload) std::cout << int(b);
    std::cout << "\n";
    return outcome.success ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar-code decoding toolkit with memory-efficient partial rewind"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key=value file");
    app.allow_config_extras(CLI::config_extras_mode::ignore_all);

    std::string kernels = "auto";
    app.add_option("--kernels", kernels, "kernel backend: auto|scalar|avx2")
        ->capture_default_str();

    // construct
    auto* construct_cmd = app.add_subcommand("construct", "build a code and save its info set");
    CodeArgs construct_args;
    add_code_options(construct_cmd, construct_args);
    std::string construct_out;
    construct_cmd->add_option("--out", construct_out, "output info-set file")->required();

    // tables
    auto* tables_cmd =
        app.add_subcommand("tables", "dump per-index schedule stages and groups as CSV");
    int tables_exp = 3;
    tables_cmd->add_option("--n", tables_exp, "code-length exponent (N = 2^n)")
        ->required()
        ->check(CLI::Range(1, 20));
    std::string tables_out;
    tables_cmd->add_option("--out", tables_out, "output file (default stdout)");

    // decode-one
    auto* decode_cmd = app.add_subcommand("decode-one", "decode one LLR vector and show the trace");
    CodeArgs decode_code;
    add_code_options(decode_cmd, decode_code);
    std::string llr_path, llr_format = "text", decode_decoder = "sc";
    uint32_t decode_list = 8;
    int decode_tmax = 8;
    std::string decode_pr = "on";
    decode_cmd->add_option("--llr", llr_path, "file of N channel LLRs")->required();
    decode_cmd->add_option("--format", llr_format, "LLR file format")
        ->check(CLI::IsMember({"text", "f64le"}));
    decode_cmd->add_option("--decoder", decode_decoder, "sc|sc-flip|scl|scl-sp")
        ->check(CLI::IsMember({"sc", "sc-flip", "scl", "scl-sp"}));
    decode_cmd->add_option("--list", decode_list, "list size L");
    decode_cmd->add_option("--tmax", decode_tmax, "max additional attempts");
    decode_cmd->add_option("--pr", decode_pr, "partial rewind on|off")
        ->check(CLI::IsMember({"on", "off"}));

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo FER/complexity campaign");
    CodeArgs sim_code;
    add_code_options(sim_cmd, sim_code);
    std::string sim_decoder = "sc";
    uint32_t sim_list = 8;
    int sim_tmax = 8;
    std::string sim_pr = "on";
    std::vector<std::string> sim_snr;
    uint64_t sim_seed = 1, sim_min_errors = 100, sim_max_frames = 1'000'000;
    int sim_workers = 0;
    std::string sim_out, sim_success = "payload";
    sim_cmd->add_option("--decoder", sim_decoder, "sc|sc-flip|scl|scl-sp")
        ->check(CLI::IsMember({"sc", "sc-flip", "scl", "scl-sp"}));
    auto* sim_list_opt = sim_cmd->add_option("--list", sim_list, "list size L");
    auto* sim_tmax_opt = sim_cmd->add_option("--tmax", sim_tmax, "max additional attempts");
    auto* sim_pr_opt = sim_cmd->add_option("--pr", sim_pr, "partial rewind on|off")
                           ->check(CLI::IsMember({"on", "off"}));
    sim_cmd->add_option("--snr", sim_snr, "Eb/N0 points, value or <start>:<stop>:<step>")
        ->required();
    sim_cmd->add_option("--seed", sim_seed, "campaign seed");
    sim_cmd->add_option("--min-errors", sim_min_errors, "stop after this many frame errors");
    sim_cmd->add_option("--max-frames", sim_max_frames, "frame cap per SNR point");
    sim_cmd->add_option("--workers", sim_workers, "worker threads (0 = hardware)")
        ->envname("POLARSIM_WORKERS");
    sim_cmd->add_option("--out", sim_out, "CSV output path (manifest at <out>.manifest)");
    sim_cmd->add_option("--success", sim_success, "frame success rule")
        ->check(CLI::IsMember({"payload", "crc"}));

    // compare
    auto* cmp_cmd =
        app.add_subcommand("compare", "partial-rewind savings between two matched runs");
    std::string cmp_with, cmp_without, cmp_out;
    cmp_cmd->add_option("--with", cmp_with, "CSV of the partial-rewind run")->required();
    cmp_cmd->add_option("--without", cmp_without, "CSV of the full-restart run")->required();
    cmp_cmd->add_option("--out", cmp_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        polar::kernels::select_backend(kernels.c_str());

        if (construct_cmd->parsed()) {
            const auto spec = build_spec(construct_args);
            polar::save_info_set(spec, construct_out);
            std::cout << "wrote " << construct_out << " (N=" << spec.block_length
                      << ", |A|=" << spec.info_set.size() << ")\n";
            return 0;
        }

        if (tables_cmd->parsed()) return run_tables(tables_exp, tables_out);

        if (decode_cmd->parsed()) {
            const bool retryable = decode_decoder == "sc-flip" || decode_decoder == "scl-sp";
            const bool listy = decode_decoder == "scl" || decode_decoder == "scl-sp";
            if (!listy && decode_cmd->count("--list"))
                throw CLI::ValidationError("--list", "only valid for list decoders");
            if (!retryable && (decode_cmd->count("--tmax") || decode_cmd->count("--pr")))
                throw CLI::ValidationError("--tmax/--pr", "only valid for retry decoders");
            const auto spec = build_spec(decode_code);
            const auto llrs = read_llr_file(llr_path, llr_format, spec.block_length);
            return run_decode_one(spec, decode_decoder, llrs, decode_list, decode_tmax,
                                  decode_pr == "on");
        }

        if (sim_cmd->parsed()) {
            const bool retryable = sim_decoder == "sc-flip" || sim_decoder == "scl-sp";
            const bool listy = sim_decoder == "scl" || sim_decoder == "scl-sp";
            if (!listy && sim_list_opt->count())
                throw CLI::ValidationError("--list", "only valid for list decoders");
            if (!retryable && (sim_tmax_opt->count() || sim_pr_opt->count()))
                throw CLI::ValidationError("--tmax/--pr", "only valid for retry decoders");

            polar::CampaignConfig config;
            config.spec = build_spec(sim_code);
            config.info_set_path = sim_code.info_set_path;
            config.decoder = sim_decoder == "sc"        ? polar::DecoderKind::Sc
                             : sim_decoder == "sc-flip" ? polar::DecoderKind::ScFlip
                             : sim_decoder == "scl"     ? polar::DecoderKind::Scl
                                                        : polar::DecoderKind::SclSp;
            config.list_size = sim_list;
            config.max_retries = sim_tmax;
            config.partial_rewind = sim_pr == "on";
            config.ebn0_db = expand_snr(sim_snr);
            if (config.ebn0_db.empty())
                throw CLI::ValidationError("--snr", "no SNR points given");
            config.seed = sim_seed;
            config.min_frame_errors = sim_min_errors;
            config.max_frames = sim_max_frames;
            config.workers = sim_workers;
            config.success_rule = sim_success == "crc" ? polar::SuccessRule::Crc
                                                       : polar::SuccessRule::Payload;

            const auto records = polar::run_campaign(config);
            const std::string csv = polar::csv_string(records);
            std::cout << csv;
            if (!sim_out.empty()) {
                std::ofstream out(sim_out);
                out << csv;
                if (!out) throw std::runtime_error("cannot write " + sim_out);
                polar::write_manifest(config, sim_out + ".manifest");
            }
            return 0;
        }

        if (cmp_cmd->parsed()) {
            const auto with_pr = polar::load_run(cmp_with);
            const auto without_pr = polar::load_run(cmp_without);
            const auto rows = polar::compare_runs(with_pr, without_pr);
            const std::string table = polar::savings_table(rows);
            if (cmp_out.empty()) {
                std::cout << table;
            } else {
                std::ofstream out(cmp_out);
                out << table;
                if (!out) throw std::runtime_error("cannot write " + cmp_out);
            }
            return 0;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
