#pragma once

#include "avdz/stream.hpp"
#include "avdz/wav.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace avdz {

struct CodecConfig {
    CoderId coder = CoderId::Avdz;
    std::optional<double> rate_bps;  // empty: variable rate (lossless re-encoding)
    PquantParams pquant;
    KernelSpec kernel;
    QuantizerMode quantizer = QuantizerMode::Perceptual;

    void validate() const;
};

inline constexpr int kSegmentLength = 160;
inline constexpr double kSegsnrCapDb = 100.0;

/// Mean of per-segment SNR over full 160-sample segments. Segments with no
/// signal energy are skipped; segment values are capped at 100 dB.
/// Returns the cap when no segment qualifies.
double segsnr(std::span<const double> original, std::span<const double> reconstructed);

/// Analyzed and quantized frames of a signal (zero padded to whole frames).
struct QuantizedSignal {
    std::vector<IntMap> maps;
    std::vector<BitAllocation> allocs;
    std::size_t sample_count = 0;
};

QuantizedSignal quantize_signal(const AudioBuffer& audio, const CodecConfig& config);

/// Reconstruction from the quantized integers without any re-encoder.
AudioBuffer reconstruct_quantized(const QuantizedSignal& q, const KernelSpec& kernel);

StreamFile encode_quantized(const QuantizedSignal& q, const CodecConfig& config);
StreamFile encode_audio(const AudioBuffer& audio, const CodecConfig& config);
AudioBuffer decode_stream(const StreamFile& file);

/// Total serialized bits divided by the signal duration.
double bit_rate(const StreamFile& file);

void encode_file(const std::filesystem::path& wav_in, const std::filesystem::path& stream_out,
                 const CodecConfig& config);
void decode_file(const std::filesystem::path& stream_in, const std::filesystem::path& wav_out);

struct MetricsRow {
    std::string file;
    std::string coder;
    double bit_rate_bps = 0;
    double segsnr_db = 0;
    double encode_s = 0;
    double decode_s = 0;
};

struct BenchVariant {
    std::string label;
    CoderId coder;
    QuantizerMode quantizer;
};

/// EZW, SPIHT, MEZW, MSPIHT, AVDZ, then AVDZ over the 7-bit uniform quantizer.
std::vector<BenchVariant> default_bench_variants();

/// Re-encode/decode timings are medians over `runs` repetitions of the
/// re-encoder stage alone (transform and quantizer excluded).
std::vector<MetricsRow> benchmark_audio(const std::string& file_id, const AudioBuffer& audio,
                                        std::span<const BenchVariant> variants, const CodecConfig& base,
                                        int runs = 5);

/// Every .wav in `dir` (sorted by name), then one "AVERAGE" row per variant.
/// Unreadable files are reported on `warn` and skipped.
std::vector<MetricsRow> benchmark_corpus(const std::filesystem::path& dir, std::span<const BenchVariant> variants,
                                         const CodecConfig& base, std::ostream& warn, int runs = 5);

void write_metrics_csv(std::ostream& os, std::span<const MetricsRow> rows);

} // namespace avdz
