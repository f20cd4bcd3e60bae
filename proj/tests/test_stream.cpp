#include "avdz/coder.hpp"
#include "avdz/errors.hpp"
#include "avdz/stream.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <numeric>
#include <random>

using namespace avdz;

namespace {

BitBuffer random_bits(std::mt19937& g, std::size_t n) {
    BitWriter w;
    for (std::size_t i = 0; i < n; ++i) w.put_bit(g() & 1u);
    return w.take();
}

FrameStream random_frame(std::mt19937& g, QuantizerMode mode) {
    FrameStream f;
    f.header.coder = *coder_from_id(g() % kCoderCount);
    f.header.last_step_level = static_cast<int>(g() % 16);
    if (mode == QuantizerMode::Perceptual) {
        f.header.alloc = alloc_from_side_code(((std::uint64_t{g()} << 32) | g()) & ((std::uint64_t{1} << 33) - 1));
    } else {
        f.header.alloc = uniform_allocation(kUniformBits);
    }
    if (f.header.last_step_level > 0 && uses_ordering(f.header.coder)) {
        std::vector<int> ids(kLeafCount);
        std::iota(ids.begin(), ids.end(), 0);
        std::shuffle(ids.begin(), ids.end(), g);
        ids.resize(g() % (kLeafCount + 1));
        f.header.ordering = ids;
    }
    f.payload = random_bits(g, f.header.last_step_level ? g() % 3000 : 0);
    return f;
}

void check_same(const FrameStream& a, const FrameStream& b, QuantizerMode mode) {
    CHECK(a.header.coder == b.header.coder);
    CHECK(a.header.last_step_level == b.header.last_step_level);
    if (a.header.last_step_level > 0 || mode == QuantizerMode::Uniform7) CHECK(a.header.alloc == b.header.alloc);
    CHECK(a.header.ordering == b.header.ordering);
    CHECK(a.payload == b.payload);
}

} // namespace

TEST_CASE("header sizes") {
    FrameHeader silent;
    CHECK(header_bits(silent, QuantizerMode::Perceptual) == 7);
    CHECK(frame_bytes(7, 0) == 3);
    FrameHeader h;
    h.coder = CoderId::Avdz;
    h.last_step_level = 6;
    h.ordering = {4, 7, 6, 1};
    CHECK(header_bits(h, QuantizerMode::Perceptual) == 7 + 33 + 25);
    CHECK(header_bits(h, QuantizerMode::Uniform7) == 7 + 25);
    h.coder = CoderId::Ezw;
    h.ordering.clear();
    CHECK(header_bits(h, QuantizerMode::Perceptual) == 7 + 33);
    CHECK(frame_bytes(40, 100) == 2 + 18);
}

TEST_CASE("frames round trip in both quantizer modes") {
    std::mt19937 g(113);
    for (auto mode : {QuantizerMode::Perceptual, QuantizerMode::Uniform7}) {
        for (int t = 0; t < 200; ++t) {
            const FrameStream f = random_frame(g, mode);
            const auto bytes = pack_frame(f, mode);
            CHECK(bytes.size() == frame_bytes(header_bits(f.header, mode), f.payload.bit_count));
            std::size_t offset = 0;
            const FrameStream back = unpack_frame(bytes, offset, mode, 0);
            CHECK(offset == bytes.size());
            check_same(f, back, mode);
        }
    }
}

TEST_CASE("silent frame layout") {
    FrameStream f;
    f.header.coder = CoderId::Mspiht;
    const auto bytes = pack_frame(f, QuantizerMode::Perceptual);
    CHECK(bytes == std::vector<std::uint8_t>{0x00, 0x00, 0b10100000});
}

TEST_CASE("damaged frames raise framing errors with the frame index") {
    std::mt19937 g(127);
    FrameStream f = random_frame(g, QuantizerMode::Perceptual);
    f.header.last_step_level = 4;
    f.payload = random_bits(g, 500);
    const auto bytes = pack_frame(f, QuantizerMode::Perceptual);

    for (std::size_t cut : {std::size_t{1}, std::size_t{3}, bytes.size() - 1}) {
        const std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        std::size_t offset = 0;
        try {
            unpack_frame(part, offset, QuantizerMode::Perceptual, 42);
            FAIL("expected a framing error");
        } catch (const FramingError& e) {
            CHECK(e.frame_index() == 42);
        }
    }

    auto bad = bytes;
    bad[2] |= 0b11100000;  // coder id 7
    std::size_t offset = 0;
    CHECK_THROWS_AS(unpack_frame(bad, offset, QuantizerMode::Perceptual, 0), FramingError);
}

TEST_CASE("file header") {
    FileHeader h;
    h.sample_count = 123456;
    h.kernel.order = 16;
    h.kernel.beta = 0.2;
    h.quantizer = QuantizerMode::Uniform7;
    const auto bytes = pack_file_header(h);
    REQUIRE(bytes.size() == kFileHeaderBytes);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "AVDZ");
    const FileHeader back = unpack_file_header(bytes);
    CHECK(back.sample_count == 123456);
    CHECK(back.kernel.order == 16);
    CHECK(back.kernel.beta == doctest::Approx(0.2));
    CHECK(back.quantizer == QuantizerMode::Uniform7);

    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(unpack_file_header(bad), FramingError);
    bad = bytes;
    bad[4] = 2;
    CHECK_THROWS_AS(unpack_file_header(bad), FramingError);
    bad = bytes;
    bad[5] = 0x1F;  // sample rate 8000
    bad[6] = 0x40;
    CHECK_THROWS_AS(unpack_file_header(bad), FramingError);
    CHECK_THROWS_AS(unpack_file_header(std::span(bytes).first(10)), FramingError);
}

TEST_CASE("stream files round trip and reject trailing bytes") {
    std::mt19937 g(131);
    StreamFile file;
    file.header.sample_count = 5 * kFrameSize - 100;
    for (int i = 0; i < 5; ++i) file.frames.push_back(random_frame(g, QuantizerMode::Perceptual));
    auto bytes = serialize(file);
    const StreamFile back = deserialize(bytes);
    REQUIRE(back.frames.size() == 5);
    for (int i = 0; i < 5; ++i) check_same(file.frames[i], back.frames[i], QuantizerMode::Perceptual);
    bytes.push_back(0);
    CHECK_THROWS_AS(deserialize(bytes), FramingError);
    bytes.resize(bytes.size() - 3);
    CHECK_THROWS_AS(deserialize(bytes), FramingError);
}

TEST_CASE("rate budget") {
    CHECK(RateController(32000, QuantizerMode::Perceptual).budget() == 1024);
    CHECK(RateController(24000, QuantizerMode::Perceptual).budget() == 768);
    CHECK(RateController::minimum_budget(QuantizerMode::Perceptual) == 16 + 176);
    CHECK(RateController::minimum_budget(QuantizerMode::Uniform7) == 16 + 144);
    CHECK_THROWS_AS(RateController(5000, QuantizerMode::Perceptual), ConfigError);
    CHECK_THROWS_AS(RateController(-1, QuantizerMode::Perceptual), ConfigError);
    CHECK_NOTHROW(RateController(6000, QuantizerMode::Perceptual));
}

TEST_CASE("payloads that fit are kept, long ones are cut to the budget") {
    std::mt19937 g(137);
    FrameStream f;
    f.header.coder = CoderId::Ezw;
    f.header.last_step_level = 7;
    f.header.alloc = alloc_from_side_code(0);
    const std::size_t h = header_bits(f.header, QuantizerMode::Perceptual);  // 40

    SUBCASE("smaller than the budget: unchanged, positive carry") {
        RateController rc(32000, QuantizerMode::Perceptual);
        f.payload = random_bits(g, 500);
        const BitBuffer before = f.payload;
        rc.apply(f, false);
        CHECK(f.payload == before);
        CHECK(rc.carry() == 1024 - static_cast<long>(frame_bytes(h, 500) * 8));
    }
    SUBCASE("exactly the budget: unchanged, zero carry") {
        RateController rc(32000, QuantizerMode::Perceptual);
        f.payload = random_bits(g, 1024 - 16 - h);
        const BitBuffer before = f.payload;
        rc.apply(f, false);
        CHECK(f.payload == before);
        CHECK(rc.carry() == 0);
    }
    SUBCASE("larger: truncated to a prefix that fills the budget") {
        RateController rc(32000, QuantizerMode::Perceptual);
        f.payload = random_bits(g, 3000);
        const BitBuffer before = f.payload;
        rc.apply(f, false);
        CHECK(f.payload.bit_count == 1024 - 16 - h);
        CHECK(f.payload == before.prefix(f.payload.bit_count));
        CHECK(rc.carry() == 0);
    }
    SUBCASE("carry is spent on the next frame") {
        RateController rc(32000, QuantizerMode::Perceptual);
        f.payload = random_bits(g, 200);
        rc.apply(f, false);
        const long carry = rc.carry();
        CHECK(carry > 0);
        f.payload = random_bits(g, 3000);
        rc.apply(f, false);
        CHECK(static_cast<long>(frame_bytes(h, f.payload.bit_count) * 8) > 1024 - 8);
        CHECK(static_cast<long>(frame_bytes(h, f.payload.bit_count) * 8) <= 1024 + carry);
    }
    SUBCASE("a charge comes out of the next frame") {
        RateController rc(32000, QuantizerMode::Perceptual);
        rc.charge(136);
        f.payload = random_bits(g, 3000);
        rc.apply(f, false);
        CHECK(pack_frame(f, QuantizerMode::Perceptual).size() * 8 == 1024 - 136);
        CHECK(rc.carry() == 0);
    }
    SUBCASE("a short final frame gets a proportional share") {
        RateController rc(32000, QuantizerMode::Perceptual);
        f.payload = random_bits(g, 3000);
        rc.apply(f, true, 128);
        CHECK(pack_frame(f, QuantizerMode::Perceptual).size() * 8 == 256);
    }
}

TEST_CASE("controlled streams hit the target to within a byte per stream") {
    std::mt19937 g(139);
    for (double rate : {24000.0, 32000.0, 40000.0, 48000.0}) {
        RateController rc(rate, QuantizerMode::Perceptual);
        long total = 0;
        const int frames = 120;
        for (int i = 0; i < frames; ++i) {
            FrameStream f;
            f.header.coder = CoderId::Avdz;
            f.header.last_step_level = (i % 10 == 0) ? 0 : 7;
            if (f.header.last_step_level) {
                f.header.ordering = {0, 1, 2, 3, 4, 5};
                f.header.alloc = alloc_from_side_code(0);
            }
            f.payload = random_bits(g, f.header.last_step_level ? g() % 2500 : 0);
            rc.apply(f, i + 1 == frames);
            total += static_cast<long>(pack_frame(f, QuantizerMode::Perceptual).size() * 8);
        }
        const long target = rc.budget() * frames;
        CHECK(total <= target);
        CHECK(total > target - 8);
    }
}

TEST_CASE("every coder decodes any controlled truncation") {
    std::mt19937 g(149);
    const IntMap m = avdz::testing::random_sparse_map(g, 127);
    for (int id = 0; id < kCoderCount; ++id) {
        const CoderId coder = *coder_from_id(id);
        const Reencoded r = reencode(coder, m);
        for (double rate : {6000.0, 9000.0, 16000.0, 32000.0, 64000.0}) {
            RateController rc(rate, QuantizerMode::Perceptual);
            FrameStream f;
            f.header.coder = coder;
            f.header.last_step_level = r.side.last_step_level;
            f.header.ordering = r.side.ordering;
            f.header.alloc = alloc_from_side_code(0);
            f.payload = r.payload.bits;
            rc.apply(f, false);
            const auto bytes = pack_frame(f, QuantizerMode::Perceptual);
            std::size_t offset = 0;
            const FrameStream back = unpack_frame(bytes, offset, QuantizerMode::Perceptual, 0);
            SideInfo side{back.header.last_step_level, back.header.ordering};
            CHECK_NOTHROW(redecode(coder, back.payload, side));
        }
    }
}
