#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>

namespace avdz {

/// Invalid parameters (kernel spec, quantizer params, rate budget).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed container or frame data.
class FramingError : public std::runtime_error {
public:
    FramingError(const std::string& what, std::size_t frame_index)
        : std::runtime_error(what + " (frame " + std::to_string(frame_index) + ")"),
          frame_index_(frame_index) {}
    explicit FramingError(const std::string& what)
        : std::runtime_error(what), frame_index_(static_cast<std::size_t>(-1)) {}

    std::size_t frame_index() const noexcept { return frame_index_; }

private:
    std::size_t frame_index_;
};

/// Unsupported or corrupt audio file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by BitReader when a read would run past the available bits.
/// Embedded decoders treat it as the end of the stream.
class EndOfStream : public std::exception {
public:
    const char* what() const noexcept override { return "end of bit stream"; }
};

} // namespace avdz
