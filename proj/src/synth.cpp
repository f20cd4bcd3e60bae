#include "avdz/synth.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace avdz {
namespace {

constexpr double kFs = 16000.0;
constexpr double kPeak = 0.98;

// Portable draws: std distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint32_t seed) : g_(seed) {}
    double uniform() { return (g_() >> 8) * (1.0 / 16777216.0); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int index(int n) { return static_cast<int>(uniform() * n); }
    double normal() {
        const double u1 = std::max(uniform(), 1e-12);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937 g_;
};

class Resonator {
public:
    void set(double freq, double bw) {
        const double r = std::exp(-std::numbers::pi * bw / kFs);
        a1_ = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / kFs);
        a2_ = -r * r;
        gain_ = 1.0 - r;
    }
    double step(double x) {
        const double y = gain_ * x + a1_ * y1_ + a2_ * y2_;
        y2_ = y1_;
        y1_ = y;
        return y;
    }

private:
    double a1_ = 0, a2_ = 0, gain_ = 0, y1_ = 0, y2_ = 0;
};

enum class Kind { Vowel, Nasal, Fricative, Plosive, Pause };

struct Phone {
    Kind kind;
    int samples;
    std::array<double, 4> formants;
    double noise_center;
    double gain;
};

// F1..F4 for a male voice; female formants are scaled up.
constexpr std::array<std::array<double, 4>, 8> kVowels = {{
    {730, 1090, 2440, 3400},
    {270, 2290, 3010, 3700},
    {300, 870, 2240, 3300},
    {530, 1840, 2480, 3500},
    {660, 1720, 2410, 3400},
    {570, 840, 2410, 3300},
    {440, 1020, 2240, 3300},
    {490, 1350, 1690, 3200},
}};

std::vector<Phone> script(Rng& rng, int total, double formant_scale) {
    std::vector<Phone> phones;
    int used = 0;
    phones.push_back({Kind::Pause, static_cast<int>(rng.uniform(0.05, 0.15) * kFs), {}, 0, 0});
    used += phones.back().samples;
    while (used < total) {
        const double p = rng.uniform();
        Phone ph{};
        if (p < 0.55) {
            ph.kind = Kind::Vowel;
            ph.samples = static_cast<int>(rng.uniform(0.08, 0.22) * kFs);
            ph.formants = kVowels[rng.index(static_cast<int>(kVowels.size()))];
            ph.gain = rng.uniform(0.7, 1.0);
        } else if (p < 0.67) {
            ph.kind = Kind::Nasal;
            ph.samples = static_cast<int>(rng.uniform(0.05, 0.10) * kFs);
            ph.formants = {280, 1300, 2300, 3300};
            ph.gain = rng.uniform(0.25, 0.4);
        } else if (p < 0.82) {
            ph.kind = Kind::Fricative;
            ph.samples = static_cast<int>(rng.uniform(0.06, 0.15) * kFs);
            ph.noise_center = rng.uniform(2500, 6500);
            ph.gain = rng.uniform(0.06, 0.18);
        } else if (p < 0.93) {
            ph.kind = Kind::Plosive;
            ph.samples = static_cast<int>(rng.uniform(0.04, 0.07) * kFs);
            ph.noise_center = rng.uniform(1500, 4500);
            ph.gain = rng.uniform(0.3, 0.6);
        } else {
            ph.kind = Kind::Pause;
            ph.samples = static_cast<int>(rng.uniform(0.10, 0.30) * kFs);
        }
        for (double& f : ph.formants) f *= formant_scale;
        phones.push_back(ph);
        used += ph.samples;
    }
    return phones;
}

void normalize_peak(std::vector<double>& x) {
    double max_abs = 0;
    for (double v : x) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0) return;
    for (double& v : x) v *= kPeak / max_abs;
}

} // namespace

AudioBuffer synth_speech(std::uint32_t seed, double seconds, bool female) {
    if (!(seconds > 0)) throw ConfigError("duration must be positive");
    Rng rng(seed);
    const int total = static_cast<int>(seconds * kFs);
    const double f0_base = female ? rng.uniform(190, 230) : rng.uniform(95, 130);
    const double formant_scale = female ? 1.17 : 1.0;
    const std::vector<Phone> phones = script(rng, total, formant_scale);

    std::array<Resonator, 4> tract;
    Resonator noise_shaper;
    std::array<double, 4> current = kVowels[0];
    double phase = 0, tilt = 0, prev_noise = 0;
    const double contour_rate = rng.uniform(0.3, 0.7);
    std::vector<double> out;
    out.reserve(total);

    for (const Phone& ph : phones) {
        const bool voiced = ph.kind == Kind::Vowel || ph.kind == Kind::Nasal;
        if (!voiced && ph.kind != Kind::Pause) noise_shaper.set(ph.noise_center, ph.noise_center * 0.4);
        std::vector<double> raw(ph.samples, 0.0);
        for (int i = 0; i < ph.samples && ph.kind != Kind::Pause; ++i) {
            if (voiced) {
                if (i % 80 == 0) {
                    for (int k = 0; k < 4; ++k) {
                        current[k] += 0.35 * (ph.formants[k] - current[k]);
                        tract[k].set(current[k], 60.0 + 0.05 * current[k]);
                    }
                }
                const double t = static_cast<double>(out.size() + i) / kFs;
                const double f0 = f0_base * (1.0 - 0.08 * t / seconds) *
                                  (1.0 + 0.06 * std::sin(2.0 * std::numbers::pi * contour_rate * t)) *
                                  (1.0 + 0.004 * rng.normal());
                phase += f0 / kFs;
                double pulse = 0;
                if (phase >= 1.0) {
                    phase -= 1.0;
                    pulse = 1.0;
                }
                // One-pole low-pass stands in for the glottal spectral tilt.
                tilt = 0.96 * tilt + pulse;
                double v = tilt + 0.02 * rng.normal();
                for (auto& r : tract) v = r.step(v);
                raw[i] = v;
            } else {
                const double w = rng.normal();
                raw[i] = noise_shaper.step(w - prev_noise);
                prev_noise = w;
            }
        }
        double energy = 0;
        for (double v : raw) energy += v * v;
        const double scale = energy > 0 ? ph.gain / std::sqrt(energy / ph.samples) : 0.0;
        const int ramp = std::min(ph.samples / 4, 240);
        for (int i = 0; i < ph.samples; ++i) {
            double env = scale;
            if (i < ramp) env *= static_cast<double>(i) / ramp;
            if (ph.samples - i < ramp) env *= static_cast<double>(ph.samples - i) / ramp;
            if (ph.kind == Kind::Plosive) env *= std::exp(-static_cast<double>(i) / (0.012 * kFs));
            out.push_back(env * raw[i]);
        }
    }
    out.resize(total, 0.0);
    normalize_peak(out);
    AudioBuffer audio;
    audio.samples = std::move(out);
    // Store exactly what a 16-bit file would hold.
    for (double& v : audio.samples) v = to_pcm(v) / 32768.0;
    return audio;
}

std::vector<std::filesystem::path> generate_corpus(const std::filesystem::path& dir, int count, double seconds,
                                                   std::uint32_t seed) {
    if (count < 0) throw ConfigError("corpus size must be non-negative");
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    for (int i = 0; i < count; ++i) {
        const bool female = i % 2 == 1;
        char name[32];
        std::snprintf(name, sizeof name, "s%02d_%c.wav", i + 1, female ? 'f' : 'm');
        const auto path = dir / name;
        write_wav(path, synth_speech(seed + 7919u * static_cast<std::uint32_t>(i), seconds, female));
        paths.push_back(path);
    }
    return paths;
}

} // namespace avdz
