// avdz: command-line front end for the wavelet-packet zero-tree codec.
//
//   avdz encode in.wav out.avz [--coder avdz] [--rate 32000|variable] ...
//   avdz decode in.avz out.wav [--ref ref.wav [--pesq-cmd CMD]]
//   avdz bench corpus/ --out metrics.csv
//   avdz kernel-dump [--kernel sav8] [--beta 0.168]
//   avdz layout-dump
//   avdz gen-corpus dir/ [--count 16] [--seconds 4] [--seed 2024]
//
// Exit codes: 0 ok, 1 usage or configuration error, 2 data error.

#include "avdz/errors.hpp"
#include "avdz/pipeline.hpp"
#include "avdz/synth.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct CodecFlags {
    std::string coder = "avdz";
    std::string rate = "variable";
    std::string kernel = "sav8";
    std::string quantizer = "perceptual";
    avdz::CodecConfig config;

    void attach(CLI::App* cmd) {
        cmd->add_option("--coder", coder, "ezw|mezw|spiht|spiht-ordered|spiht-modo|mspiht|avdz")->capture_default_str();
        cmd->add_option("--rate", rate, "target bit/s, or 'variable'")->capture_default_str();
        add_pquant_flags(cmd);
        add_kernel_flags(cmd);
        cmd->add_option("--quantizer", quantizer, "perceptual|uniform7")->capture_default_str();
    }

    void add_pquant_flags(CLI::App* cmd) {
        cmd->add_option("--alpha", config.pquant.alpha, "I-Factor exponent")->capture_default_str();
        cmd->add_option("--e1", config.pquant.e1, "narrow energy below which quiet bands gain a bit")
            ->capture_default_str();
        cmd->add_option("--e2", config.pquant.e2, "band energy counted as quiet")->capture_default_str();
        cmd->add_option("--e3", config.pquant.e3, "narrow energy above which loud bands lose a bit")
            ->capture_default_str();
        cmd->add_option("--e4", config.pquant.e4, "band energy counted as loud")->capture_default_str();
    }

    void add_kernel_flags(CLI::App* cmd) {
        cmd->add_option("--kernel", kernel, "savN raised-cosine kernel")->capture_default_str();
        cmd->add_option("--beta", config.kernel.beta, "kernel transition half-width")->capture_default_str();
    }

    // Throws ConfigError on bad values.
    avdz::CodecConfig resolve() {
        const auto id = avdz::parse_coder(coder);
        if (!id) throw avdz::ConfigError("unknown coder '" + coder + "'");
        config.coder = *id;
        resolve_kernel();
        if (rate == "variable") {
            config.rate_bps.reset();
        } else {
            try {
                std::size_t used = 0;
                config.rate_bps = std::stod(rate, &used);
                if (used != rate.size()) throw std::invalid_argument(rate);
            } catch (const std::exception&) {
                throw avdz::ConfigError("bad --rate '" + rate + "'");
            }
        }
        if (quantizer == "perceptual") {
            config.quantizer = avdz::QuantizerMode::Perceptual;
        } else if (quantizer == "uniform7") {
            config.quantizer = avdz::QuantizerMode::Uniform7;
        } else {
            throw avdz::ConfigError("unknown quantizer '" + quantizer + "'");
        }
        config.validate();
        return config;
    }

    void resolve_kernel() {
        if (kernel.rfind("sav", 0) != 0) throw avdz::ConfigError("kernel must be savN");
        try {
            config.kernel.order = std::stoi(kernel.substr(3));
        } catch (const std::exception&) {
            throw avdz::ConfigError("bad kernel '" + kernel + "'");
        }
        config.kernel.validate();
    }
};

int run_pesq(const std::string& cmd, const std::string& ref, const std::string& degraded) {
    const std::string line = cmd + " \"" + ref + "\" \"" + degraded + "\"";
    const int rc = std::system(line.c_str());
    if (rc != 0) std::cerr << "pesq command failed (" << rc << ")\n";
    return rc == 0 ? 0 : kDataError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavelet-packet zero-tree speech codec"};
    app.require_subcommand(1);

    std::string in_path, out_path;

    CodecFlags enc_flags;
    auto* enc = app.add_subcommand("encode", "WAV to compressed stream");
    enc->add_option("input", in_path, "16-bit mono 16 kHz WAV")->required();
    enc->add_option("output", out_path, "stream file")->required();
    enc_flags.attach(enc);

    std::string pesq_cmd, ref_path;
    auto* dec = app.add_subcommand("decode", "compressed stream to WAV");
    dec->add_option("input", in_path, "stream file")->required();
    dec->add_option("output", out_path, "WAV file")->required();
    auto* ref_opt = dec->add_option("--ref", ref_path, "original WAV; prints the SEGSNR of the decode");
    dec->add_option("--pesq-cmd", pesq_cmd, "external scorer run as CMD <ref.wav> <decoded.wav>")->needs(ref_opt);

    CodecFlags bench_flags;
    std::string csv_path;
    int runs = 5;
    auto* bench = app.add_subcommand("bench", "benchmark every coder over a directory of WAVs");
    bench->add_option("dir", in_path, "corpus directory")->required();
    bench->add_option("--out", csv_path, "CSV output (stdout if omitted)");
    bench->add_option("--runs", runs, "timing repetitions (median)")->capture_default_str();
    bench_flags.add_pquant_flags(bench);
    bench_flags.add_kernel_flags(bench);

    CodecFlags kernel_flags;
    auto* kdump = app.add_subcommand("kernel-dump", "print the analysis/synthesis filter taps as CSV");
    kernel_flags.add_kernel_flags(kdump);

    auto* ldump = app.add_subcommand("layout-dump", "print the sub-band layout as CSV");

    int count = 16;
    double seconds = 4.0;
    std::uint32_t seed = 2024;
    auto* gen = app.add_subcommand("gen-corpus", "write a synthetic speech corpus");
    gen->add_option("dir", out_path, "output directory")->required();
    gen->add_option("--count", count, "number of files")->capture_default_str();
    gen->add_option("--seconds", seconds, "length of each file")->capture_default_str();
    gen->add_option("--seed", seed, "generator seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsageError;
    }

    try {
        if (*enc) {
            avdz::encode_file(in_path, out_path, enc_flags.resolve());
        } else if (*dec) {
            avdz::decode_file(in_path, out_path);
            if (!ref_path.empty()) {
                const avdz::AudioBuffer ref = avdz::read_wav(ref_path);
                const avdz::AudioBuffer out = avdz::read_wav(out_path);
                if (ref.samples.size() != out.samples.size())
                    throw avdz::FormatError("reference and decoded lengths differ");
                std::cout << "segsnr_db," << avdz::segsnr(ref.samples, out.samples) << '\n';
            }
            if (!pesq_cmd.empty()) return run_pesq(pesq_cmd, ref_path, out_path);
        } else if (*bench) {
            bench_flags.resolve_kernel();
            bench_flags.config.validate();
            const auto variants = avdz::default_bench_variants();
            const auto rows = avdz::benchmark_corpus(in_path, variants, bench_flags.config, std::cerr, runs);
            if (csv_path.empty()) {
                avdz::write_metrics_csv(std::cout, rows);
            } else {
                std::ofstream os(csv_path);
                if (!os) throw std::runtime_error("cannot create " + csv_path);
                avdz::write_metrics_csv(os, rows);
            }
        } else if (*kdump) {
            kernel_flags.resolve_kernel();
            const auto q = avdz::make_quadruple(kernel_flags.config.kernel);
            std::cout << "n,analysis_lo,analysis_hi,synthesis_lo,synthesis_hi\n" << std::setprecision(17);
            for (std::size_t n = 0; n < q.size(); ++n)
                std::cout << n << ',' << q.analysis_lo[n] << ',' << q.analysis_hi[n] << ',' << q.synthesis_lo[n]
                          << ',' << q.synthesis_hi[n] << '\n';
        } else if (*ldump) {
            avdz::dump_layout_csv(std::cout, avdz::layout());
        } else if (*gen) {
            for (const auto& p : avdz::generate_corpus(out_path, count, seconds, seed)) std::cout << p.string() << '\n';
        }
    } catch (const avdz::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return 0;
}
