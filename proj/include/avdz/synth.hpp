#pragma once

#include "avdz/wav.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace avdz {

/// Source-filter speech-like signal: a glottal pulse train with an F0
/// contour through formant resonators for vowels and nasals, shaped noise for
/// fricatives, bursts for plosives, and pauses. Peak-normalized to 0.98 of
/// full scale. Output depends only on the arguments.
AudioBuffer synth_speech(std::uint32_t seed, double seconds, bool female);

/// Writes `count` clips named sNN_m.wav / sNN_f.wav (alternating voices) into
/// `dir` and returns their paths.
std::vector<std::filesystem::path> generate_corpus(const std::filesystem::path& dir, int count = 16,
                                                   double seconds = 4.0, std::uint32_t seed = 2024);

} // namespace avdz
