#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace avdz {

/// Mono audio at 16 kHz as reals in [-1, 1) (16-bit PCM scaled by 1/32768).
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 16000;

    double seconds() const { return static_cast<double>(samples.size()) / sample_rate; }
};

/// Parses a RIFF/WAVE file holding 16-bit mono PCM at 16 kHz. Throws FormatError otherwise.
AudioBuffer parse_wav(std::span<const std::uint8_t> bytes);

/// 16-bit PCM encoding with rounding and saturation.
std::vector<std::uint8_t> format_wav(const AudioBuffer& audio);

std::int16_t to_pcm(double sample);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

AudioBuffer read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio);

} // namespace avdz
