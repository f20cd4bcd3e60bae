#include "avdz/pipeline.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace avdz {

void CodecConfig::validate() const {
    pquant.validate();
    kernel.validate();
    if (rate_bps) RateController(*rate_bps, quantizer);
}

double segsnr(std::span<const double> original, std::span<const double> reconstructed) {
    if (original.size() != reconstructed.size()) throw std::invalid_argument("segsnr: length mismatch");
    double sum = 0;
    int counted = 0;
    for (std::size_t s = 0; s + kSegmentLength <= original.size(); s += kSegmentLength) {
        double signal = 0, noise = 0;
        for (std::size_t i = s; i < s + kSegmentLength; ++i) {
            signal += original[i] * original[i];
            const double e = original[i] - reconstructed[i];
            noise += e * e;
        }
        if (signal == 0) continue;
        sum += noise == 0 ? kSegsnrCapDb : std::min(kSegsnrCapDb, 10.0 * std::log10(signal / noise));
        ++counted;
    }
    return counted ? sum / counted : kSegsnrCapDb;
}

QuantizedSignal quantize_signal(const AudioBuffer& audio, const CodecConfig& config) {
    config.validate();
    if (audio.sample_rate != kSampleRate) throw FormatError("sample rate must be 16000 Hz");
    const FilterQuadruple q = make_quadruple(config.kernel);
    QuantizedSignal out;
    out.sample_count = audio.samples.size();
    std::vector<double> frame(kFrameSize);
    for (std::size_t start = 0; start < audio.samples.size(); start += kFrameSize) {
        const std::size_t n = std::min<std::size_t>(kFrameSize, audio.samples.size() - start);
        std::fill(frame.begin(), frame.end(), 0.0);
        std::copy_n(audio.samples.begin() + static_cast<long>(start), n, frame.begin());
        const RealMap coeffs = analyze(frame, q);
        const BitAllocation alloc = config.quantizer == QuantizerMode::Perceptual
                                        ? allocate_bits(coeffs, config.pquant)
                                        : uniform_allocation(kUniformBits);
        out.maps.push_back(quantize(coeffs, alloc).map);
        out.allocs.push_back(alloc);
    }
    return out;
}

namespace {

AudioBuffer synthesize_frames(const std::vector<RealMap>& dequantized, std::size_t sample_count,
                              const KernelSpec& kernel) {
    const FilterQuadruple q = make_quadruple(kernel);
    AudioBuffer out;
    out.samples.reserve(dequantized.size() * kFrameSize);
    for (const auto& m : dequantized) {
        const auto frame = synthesize(m, q);
        out.samples.insert(out.samples.end(), frame.begin(), frame.end());
    }
    out.samples.resize(sample_count);
    return out;
}

} // namespace

AudioBuffer reconstruct_quantized(const QuantizedSignal& q, const KernelSpec& kernel) {
    std::vector<RealMap> maps;
    maps.reserve(q.maps.size());
    for (std::size_t i = 0; i < q.maps.size(); ++i) maps.push_back(dequantize(q.maps[i], q.allocs[i]));
    return synthesize_frames(maps, q.sample_count, kernel);
}

StreamFile encode_quantized(const QuantizedSignal& q, const CodecConfig& config) {
    if (q.sample_count > 0xFFFFFFFFu) throw ConfigError("signal too long for the container");
    StreamFile file;
    file.header.sample_count = static_cast<std::uint32_t>(q.sample_count);
    file.header.kernel = config.kernel;
    file.header.quantizer = config.quantizer;
    std::optional<RateController> rc;
    if (config.rate_bps) {
        rc.emplace(*config.rate_bps, config.quantizer);
        rc->charge(static_cast<long>(kFileHeaderBytes * 8));
    }
    for (std::size_t i = 0; i < q.maps.size(); ++i) {
        Reencoded r = reencode(config.coder, q.maps[i]);
        FrameStream f;
        f.header.coder = config.coder;
        f.header.last_step_level = r.side.last_step_level;
        f.header.alloc = q.allocs[i];
        f.header.ordering = std::move(r.side.ordering);
        f.payload = std::move(r.payload.bits);
        if (rc) rc->apply(f, i + 1 == q.maps.size(), std::min<std::size_t>(kFrameSize, q.sample_count - i * kFrameSize));
        file.frames.push_back(std::move(f));
    }
    return file;
}

StreamFile encode_audio(const AudioBuffer& audio, const CodecConfig& config) {
    return encode_quantized(quantize_signal(audio, config), config);
}

AudioBuffer decode_stream(const StreamFile& file) {
    std::vector<RealMap> maps;
    maps.reserve(file.frames.size());
    for (const auto& f : file.frames) {
        const SideInfo side{f.header.last_step_level, f.header.ordering};
        const RealMap values = redecode(f.header.coder, f.payload, side);
        maps.push_back(f.header.last_step_level > 0 ? dequantize(values, f.header.alloc) : RealMap{});
    }
    return synthesize_frames(maps, file.header.sample_count, file.header.kernel);
}

double bit_rate(const StreamFile& file) {
    if (file.header.sample_count == 0) return 0.0;
    const double seconds = static_cast<double>(file.header.sample_count) / kSampleRate;
    return static_cast<double>(serialize(file).size() * 8) / seconds;
}

void encode_file(const std::filesystem::path& wav_in, const std::filesystem::path& stream_out,
                 const CodecConfig& config) {
    write_file(stream_out, serialize(encode_audio(read_wav(wav_in), config)));
}

void decode_file(const std::filesystem::path& stream_in, const std::filesystem::path& wav_out) {
    write_wav(wav_out, decode_stream(deserialize(read_file(stream_in))));
}

std::vector<BenchVariant> default_bench_variants() {
    return {
        {"EZW", CoderId::Ezw, QuantizerMode::Perceptual},
        {"SPIHT", CoderId::Spiht, QuantizerMode::Perceptual},
        {"MEZW", CoderId::Mezw, QuantizerMode::Perceptual},
        {"MSPIHT", CoderId::Mspiht, QuantizerMode::Perceptual},
        {"AVDZ", CoderId::Avdz, QuantizerMode::Perceptual},
        {"AVDZ-U7", CoderId::Avdz, QuantizerMode::Uniform7},
    };
}

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

template <typename F>
double seconds_of(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

std::vector<MetricsRow> benchmark_audio(const std::string& file_id, const AudioBuffer& audio,
                                        std::span<const BenchVariant> variants, const CodecConfig& base,
                                        int runs) {
    if (runs < 1) throw ConfigError("benchmark needs at least one run");
    std::map<QuantizerMode, QuantizedSignal> prepared;
    std::vector<MetricsRow> rows;
    for (const auto& v : variants) {
        CodecConfig cfg = base;
        cfg.coder = v.coder;
        cfg.quantizer = v.quantizer;
        auto it = prepared.find(v.quantizer);
        if (it == prepared.end()) it = prepared.emplace(v.quantizer, quantize_signal(audio, cfg)).first;
        const QuantizedSignal& q = it->second;

        std::vector<Reencoded> encoded(q.maps.size());
        std::vector<double> enc_times, dec_times;
        volatile double sink = 0;
        for (int run = 0; run < runs; ++run) {
            enc_times.push_back(seconds_of([&] {
                for (std::size_t i = 0; i < q.maps.size(); ++i) encoded[i] = reencode(v.coder, q.maps[i]);
            }));
            dec_times.push_back(seconds_of([&] {
                for (const auto& e : encoded) sink = sink + redecode(v.coder, e.payload.bits, e.side).flat()[0];
            }));
        }
        const StreamFile file = encode_quantized(q, cfg);
        const AudioBuffer decoded = decode_stream(file);
        rows.push_back({file_id, v.label, bit_rate(file), segsnr(audio.samples, decoded.samples),
                        median(enc_times), median(dec_times)});
    }
    return rows;
}

std::vector<MetricsRow> benchmark_corpus(const std::filesystem::path& dir, std::span<const BenchVariant> variants,
                                         const CodecConfig& base, std::ostream& warn, int runs) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".wav") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<MetricsRow> rows;
    for (const auto& path : files) {
        AudioBuffer audio;
        try {
            audio = read_wav(path);
        } catch (const std::exception& e) {
            warn << "skipping " << path.string() << ": " << e.what() << '\n';
            continue;
        }
        const auto file_rows = benchmark_audio(path.filename().string(), audio, variants, base, runs);
        rows.insert(rows.end(), file_rows.begin(), file_rows.end());
    }
    const std::size_t per_file = rows.size();
    for (const auto& v : variants) {
        MetricsRow avg{"AVERAGE", v.label};
        int n = 0;
        for (std::size_t i = 0; i < per_file; ++i) {
            if (rows[i].coder != v.label) continue;
            avg.bit_rate_bps += rows[i].bit_rate_bps;
            avg.segsnr_db += rows[i].segsnr_db;
            avg.encode_s += rows[i].encode_s;
            avg.decode_s += rows[i].decode_s;
            ++n;
        }
        if (n == 0) continue;
        avg.bit_rate_bps /= n;
        avg.segsnr_db /= n;
        avg.encode_s /= n;
        avg.decode_s /= n;
        rows.push_back(avg);
    }
    return rows;
}

void write_metrics_csv(std::ostream& os, std::span<const MetricsRow> rows) {
    os << "file,coder,bit_rate_bps,segsnr_db,encode_s,decode_s\n";
    for (const auto& r : rows)
        os << r.file << ',' << r.coder << ',' << r.bit_rate_bps << ',' << r.segsnr_db << ',' << r.encode_s << ','
           << r.decode_s << '\n';
}

} // namespace avdz
