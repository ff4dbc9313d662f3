// midicoth - lossless byte-stream compressor with a five-layer adaptive
// pipeline (PPM, match, word, high-order contexts, Tweedie denoising) in
// front of an arithmetic coder.
//
// Subcommands: c (compress), d (decompress), bench (layer ablation),
// stats (denoiser score diagnostics).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "midicoth/codec.hpp"
#include "midicoth/error.hpp"

namespace {

using midicoth::CascadeRow;
using midicoth::PipelineConfig;

std::vector<uint8_t> read_input(const std::string& path) {
    if (path == "-") {
        std::vector<uint8_t> data;
        char buf[1 << 16];
        while (std::cin.read(buf, sizeof(buf)) || std::cin.gcount() > 0) {
            data.insert(data.end(), buf, buf + std::cin.gcount());
        }
        return data;
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read '" + path + "'");
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(f),
                                std::istreambuf_iterator<char>());
}

void write_output(const std::string& path, const std::vector<uint8_t>& data) {
    if (path == "-") {
        std::cout.write(reinterpret_cast<const char*>(data.data()),
                        static_cast<std::streamsize>(data.size()));
        std::cout.flush();
        if (!std::cout) throw std::runtime_error("cannot write to stdout");
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

struct LayerFlags {
    bool no_match = false;
    bool no_word = false;
    bool no_highctx = false;
    bool no_tweedie = false;
    int steps = 3;

    PipelineConfig config() const {
        PipelineConfig cfg;
        cfg.match = !no_match;
        cfg.word = !no_word;
        cfg.highctx = !no_highctx;
        cfg.tweedie = !no_tweedie;
        cfg.tweedie_steps = steps;
        return cfg;
    }
};

void add_layer_flags(CLI::App* cmd, LayerFlags& flags) {
    cmd->add_flag("--no-match", flags.no_match, "disable the match layer");
    cmd->add_flag("--no-word", flags.no_word, "disable the word layer");
    cmd->add_flag("--no-highctx", flags.no_highctx,
                  "disable the order-5..8 layer");
    cmd->add_flag("--no-tweedie", flags.no_tweedie,
                  "disable the denoising layer");
    cmd->add_option("--steps", flags.steps, "denoising passes (1-4)")
        ->check(CLI::Range(1, 4));
}

void print_diagnostics(std::FILE* out, const midicoth::TweedieDenoiser& den) {
    std::fprintf(out, "gamma\tC_center\tstep\tmean_abs_delta\tweight\n");
    for (const auto& row : den.diagnostics()) {
        std::fprintf(out, "%.6f\t%.0f\t%d\t%.6f\t%llu\n", row.gamma,
                     row.conf_center, row.step, row.mean_abs_delta,
                     static_cast<unsigned long long>(row.weight));
    }
}

int cmd_compress(const std::string& in_path, const std::string& out_path,
                 const LayerFlags& flags, const std::string& stats_out) {
    std::vector<uint8_t> input = read_input(in_path);
    PipelineConfig cfg = flags.config();

    auto t0 = std::chrono::steady_clock::now();
    midicoth::StreamEncoder enc(cfg);
    for (uint8_t b : input) enc.push(b);
    std::vector<uint8_t> out = midicoth::encode_header(cfg, input.size());
    std::vector<uint8_t> payload = enc.finish_payload();
    out.insert(out.end(), payload.begin(), payload.end());
    auto t1 = std::chrono::steady_clock::now();

    write_output(out_path, out);

    double secs = std::chrono::duration<double>(t1 - t0).count();
    double ratio = input.empty() ? 0.0
                                 : 100.0 * static_cast<double>(out.size()) /
                                       static_cast<double>(input.size());
    double bpb = input.empty() ? 0.0
                               : 8.0 * static_cast<double>(out.size()) /
                                     static_cast<double>(input.size());
    double speed = secs > 0.0
                       ? static_cast<double>(input.size()) / secs / 1024.0
                       : 0.0;
    std::fprintf(stderr, "%s: %zu -> %zu bytes  %.1f%%  %.3f bpb  %.1f KB/s\n",
                 in_path.c_str(), input.size(), out.size(), ratio, bpb, speed);

    if (!stats_out.empty() && cfg.tweedie) {
        std::FILE* f = std::fopen(stats_out.c_str(), "w");
        if (!f) throw std::runtime_error("cannot write '" + stats_out + "'");
        print_diagnostics(f, enc.pipeline().denoiser());
        std::fclose(f);
    }
    return 0;
}

int cmd_decompress(const std::string& in_path, const std::string& out_path) {
    std::vector<uint8_t> container = read_input(in_path);
    std::vector<uint8_t> output = midicoth::decompress(container);
    write_output(out_path, output);
    std::fprintf(stderr, "%s: %zu -> %zu bytes\n", in_path.c_str(),
                 container.size(), output.size());
    return 0;
}

void print_cascade(const std::string& label,
                   const std::vector<CascadeRow>& rows, uint64_t original) {
    // Machine-readable rows on stdout, one per configuration.
    for (const auto& r : rows) {
        std::printf("bench\t%s\t%s\t%llu\t%llu\t%.4f\t%+.4f\t%.3f\n",
                    label.c_str(), r.name.c_str(),
                    static_cast<unsigned long long>(original),
                    static_cast<unsigned long long>(r.compressed_size),
                    r.ratio, r.marginal_gain, r.seconds);
    }
    // Aligned table for humans on stderr.
    std::fprintf(stderr, "\n%s (%llu bytes)\n", label.c_str(),
                 static_cast<unsigned long long>(original));
    std::fprintf(stderr, "  %-16s %10s %8s %8s %8s\n", "config", "size",
                 "ratio", "delta", "time");
    double total = 0.0;
    for (const auto& r : rows) {
        std::fprintf(stderr, "  %-16s %10llu %7.2f%% %+7.2f%% %7.1fs\n",
                     r.name.c_str(),
                     static_cast<unsigned long long>(r.compressed_size),
                     100.0 * r.ratio, 100.0 * r.marginal_gain, r.seconds);
    }
    total = rows.empty() || rows.front().compressed_size == 0
                ? 0.0
                : 100.0 *
                      (static_cast<double>(rows.front().compressed_size) -
                       static_cast<double>(rows.back().compressed_size)) /
                      static_cast<double>(rows.front().compressed_size);
    std::fprintf(stderr, "  total improvement: %+.2f%%\n", total);
}

int cmd_bench(std::vector<std::string> files, int steps) {
    if (files.empty()) {
        const char* env = std::getenv("MIDICOTH_CORPUS");
        std::string dir = env ? env : "corpus";
        files.push_back(dir + "/canterbury/alice29.txt");
        files.push_back(dir + "/enwik8_3m");
    }
    std::vector<std::string> missing;
    for (const auto& f : files) {
        if (!std::filesystem::exists(f)) missing.push_back(f);
    }
    if (!missing.empty()) {
        std::fprintf(stderr, "missing corpus files:\n");
        for (const auto& f : missing) std::fprintf(stderr, "  %s\n", f.c_str());
        return 1;
    }
    for (const auto& f : files) {
        std::vector<uint8_t> input = read_input(f);
        print_cascade(f, midicoth::run_cascade(input, steps), input.size());
    }
    return 0;
}

int cmd_stats(const std::string& in_path, const LayerFlags& flags,
              bool with_cascade) {
    std::vector<uint8_t> input = read_input(in_path);
    PipelineConfig cfg = flags.config();
    cfg.tweedie = true; // diagnostics require the denoiser

    midicoth::StreamEncoder enc(cfg);
    for (uint8_t b : input) enc.push(b);
    std::vector<uint8_t> payload = enc.finish_payload();
    uint64_t total_size = midicoth::kHeaderSize + payload.size();

    print_diagnostics(stdout, enc.pipeline().denoiser());

    std::fprintf(stderr, "compressed: %llu bytes (%.3f bpb)\n",
                 static_cast<unsigned long long>(total_size),
                 input.empty() ? 0.0
                               : 8.0 * static_cast<double>(total_size) /
                                     static_cast<double>(input.size()));
    std::fprintf(stderr,
                 "quantization overhead: %+.0f bytes "
                 "(coded %.0f bits vs model %.0f bits)\n",
                 (enc.coded_cost_bits() - enc.model_cost_bits()) / 8.0,
                 enc.coded_cost_bits(), enc.model_cost_bits());

    if (with_cascade) {
        print_cascade(in_path, midicoth::run_cascade(input, flags.steps),
                      input.size());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"midicoth lossless compressor"};
    app.require_subcommand(1);

    std::string in_path = "-";
    std::string out_path = "-";
    std::string stats_out;
    LayerFlags flags;
    std::vector<std::string> bench_files;
    bool stats_cascade = true;

    CLI::App* c = app.add_subcommand("c", "compress a file or stdin");
    c->add_option("input", in_path, "input path, - for stdin");
    c->add_option("output", out_path, "output path, - for stdout");
    add_layer_flags(c, flags);
    c->add_option("--stats-out", stats_out,
                  "write denoiser diagnostics to this path");

    CLI::App* d = app.add_subcommand("d", "decompress a container");
    d->add_option("input", in_path, "input path, - for stdin");
    d->add_option("output", out_path, "output path, - for stdout");

    CLI::App* bench = app.add_subcommand("bench", "run the layer ablation");
    bench->add_option("files", bench_files,
                      "corpus files (default: $MIDICOTH_CORPUS)");
    bench->add_option("--steps", flags.steps, "denoising passes (1-4)")
        ->check(CLI::Range(1, 4));

    CLI::App* stats = app.add_subcommand("stats", "score diagnostics");
    stats->add_option("input", in_path, "input path, - for stdin");
    add_layer_flags(stats, flags);
    stats->add_flag("!--no-cascade", stats_cascade,
                    "skip the per-layer bit accounting");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c)) {
            return cmd_compress(in_path, out_path, flags, stats_out);
        }
        if (app.got_subcommand(d)) {
            return cmd_decompress(in_path, out_path);
        }
        if (app.got_subcommand(bench)) {
            return cmd_bench(bench_files, flags.steps);
        }
        if (app.got_subcommand(stats)) {
            return cmd_stats(in_path, flags, stats_cascade);
        }
    } catch (const midicoth::CodecError& e) {
        std::fprintf(stderr, "midicoth: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "midicoth: %s\n", e.what());
        return 1;
    }
    return 0;
}
