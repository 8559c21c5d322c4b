#include <doctest.h>

#include <algorithm>
#include <random>

#include "aerofit/error.hpp"
#include "aerofit/mask.hpp"
#include "aerofit/png_io.hpp"
#include "oracles.hpp"

using namespace aerofit;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an aerofit::Error");
    return ErrorCode::Io;
}

BinaryMask checkerboard(int w, int h) {
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m.set(x, y, (x + y) % 2 == 0);
    return m;
}

}  // namespace

TEST_CASE("to_grayscale") {
    SUBCASE("black and white") {
        const std::vector<std::uint8_t> black(3 * 6, 0), white(3 * 6, 255);
        const GrayImage b = to_grayscale(black, 3, 2);
        const GrayImage w = to_grayscale(white, 3, 2);
        CHECK(std::all_of(b.data().begin(), b.data().end(), [](auto v) { return v == 0; }));
        CHECK(std::all_of(w.data().begin(), w.data().end(), [](auto v) { return v == 255; }));
    }
    SUBCASE("pure red is 76") {
        // 0.299 * 255 = 76.245
        const std::vector<std::uint8_t> red = {255, 0, 0};
        CHECK(to_grayscale(red, 1, 1).at(0, 0) == 76);
    }
    SUBCASE("length mismatch") {
        const std::vector<std::uint8_t> bad(8, 0);
        CHECK(code_of([&] { to_grayscale(bad, 3, 1); }) == ErrorCode::DimensionMismatch);
    }
    SUBCASE("luma stays within channel range") {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<int> v(0, 255);
        std::vector<std::uint8_t> rgb(3 * 64 * 64);
        for (auto& c : rgb) c = static_cast<std::uint8_t>(v(rng));
        const GrayImage g = to_grayscale(rgb, 64, 64);
        for (std::size_t i = 0; i < g.data().size(); ++i) {
            const int lo = std::min({rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]});
            const int hi = std::max({rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]});
            CHECK(g.data()[i] >= lo - 1);
            CHECK(g.data()[i] <= hi + 1);
        }
    }
}

TEST_CASE("subtract_background") {
    std::mt19937_64 rng(11);
    SUBCASE("identical frames give an empty mask") {
        const GrayImage img = oracle::random_gray(rng, 16, 12);
        for (int t : {0, 30, 200}) CHECK(subtract_background(img, img, t).empty());
    }
    SUBCASE("maximal difference") {
        const BinaryMask m = subtract_background(GrayImage(5, 5, 0), GrayImage(5, 5, 255), 50);
        CHECK(m.foreground_count() == 25);
    }
    SUBCASE("matches pixelwise oracle") {
        for (int trial = 0; trial < 20; ++trial) {
            const GrayImage a = oracle::random_gray(rng, 8, 8);
            const GrayImage b = oracle::random_gray(rng, 8, 8);
            const BinaryMask m = subtract_background(a, b, 30);
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    const int d = int{a.at(x, y)} - int{b.at(x, y)};
                    CHECK(m.at(x, y) == (d > 30 || d < -30));
                }
        }
    }
    SUBCASE("symmetric in its arguments, empty at 255") {
        for (int trial = 0; trial < 20; ++trial) {
            const GrayImage a = oracle::random_gray(rng, 13, 9);
            const GrayImage b = oracle::random_gray(rng, 13, 9);
            CHECK(subtract_background(a, b, 40) == subtract_background(b, a, 40));
            CHECK(subtract_background(a, b, 255).empty());
        }
    }
    SUBCASE("shape mismatch") {
        CHECK(code_of([] { subtract_background(GrayImage(4, 4), GrayImage(4, 5), 30); }) ==
              ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("clean_mask") {
    std::mt19937_64 rng(5);
    SUBCASE("radius 0 is the identity") {
        const BinaryMask m = oracle::random_mask(rng, 11, 7);
        CHECK(clean_mask(m, 0) == m);
    }
    SUBCASE("isolated pixel is removed") {
        BinaryMask m(9, 9);
        m.set(4, 4, true);
        CHECK(clean_mask(m, 1).empty());
        CHECK(oracle::clean(m, 1).empty());
    }
    SUBCASE("single interior hole is filled") {
        BinaryMask m(5, 5, true);
        m.set(2, 2, false);
        CHECK(clean_mask(m, 1) == BinaryMask(5, 5, true));
        CHECK(oracle::clean(m, 1) == BinaryMask(5, 5, true));
    }
    SUBCASE("matches reference morphology and is monotone per stage") {
        for (int trial = 0; trial < 60; ++trial) {
            const int w = 4 + trial % 13, h = 16 - trial % 9;
            const int r = 1 + trial % 2;
            const BinaryMask m = oracle::random_mask(rng, w, h, 0.3 + 0.01 * (trial % 40));
            const auto opened = oracle::opening(w, h, oracle::pixels(m), r);
            const auto closed = oracle::closing(w, h, opened, r);
            CHECK(dilate(erode(m, r), r) == oracle::from_set(w, h, opened));
            CHECK(clean_mask(m, r) == oracle::from_set(w, h, closed));
            CHECK(opened.size() <= m.foreground_count());
            CHECK(closed.size() >= opened.size());
        }
    }
    SUBCASE("dilation matches Chebyshev neighbourhood") {
        for (int trial = 0; trial < 20; ++trial) {
            const BinaryMask m = oracle::random_mask(rng, 12, 10, 0.1);
            CHECK(dilate(m, 2) == oracle::from_set(12, 10, oracle::dilation(12, 10, oracle::pixels(m), 2)));
        }
    }
}

TEST_CASE("crop_to_guide") {
    SUBCASE("full rect is the identity and idempotent") {
        const BinaryMask m = checkerboard(7, 5);
        const GuideRect full{0, 0, 7, 5};
        CHECK(crop_to_guide(m, full) == m);
        CHECK(crop_to_guide(crop_to_guide(m, full), full) == m);
    }
    SUBCASE("uniform content") {
        const BinaryMask c = crop_to_guide(BinaryMask(10, 10, true), {2, 2, 4, 4});
        CHECK(c.width() == 4);
        CHECK(c.height() == 4);
        CHECK(c.foreground_count() == 16);
    }
    SUBCASE("index remap") {
        const BinaryMask m = checkerboard(8, 8);
        const BinaryMask c = crop_to_guide(m, {1, 0, 3, 3});
        for (int y = 0; y < 3; ++y)
            for (int x = 0; x < 3; ++x) CHECK(c.at(x, y) == ((x + 1 + y) % 2 == 0));
    }
    SUBCASE("out of bounds") {
        const BinaryMask m(8, 8);
        CHECK(code_of([&] { crop_to_guide(m, {5, 0, 4, 2}); }) == ErrorCode::OutOfBounds);
        CHECK(code_of([&] { crop_to_guide(m, {0, 0, 0, 2}); }) == ErrorCode::OutOfBounds);
        CHECK(code_of([&] { crop_to_guide(m, {-1, 0, 2, 2}); }) == ErrorCode::OutOfBounds);
    }
}

TEST_CASE("mask constructors normalise and validate") {
    const BinaryMask m(2, 2, std::vector<std::uint8_t>{0, 7, 255, 0});
    CHECK(m.foreground_count() == 2);
    CHECK(code_of([] { BinaryMask(2, 2, std::vector<std::uint8_t>(3)); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([] { GrayImage(0, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("png codec") {
    std::mt19937_64 rng(3);
    SUBCASE("mask encodes 0/255 and decodes bit-exactly") {
        const BinaryMask m = oracle::random_mask(rng, 17, 9);
        const auto bytes = png::encode_mask(m);
        CHECK(png::decode_mask(bytes) == m);
        const GrayImage g = png::decode_gray(bytes);
        for (auto v : g.data()) CHECK((v == 0 || v == 255));
        CHECK(png::encode_mask(m) == bytes);
    }
    SUBCASE("any nonzero value is foreground") {
        GrayImage g(3, 1);
        g.set(0, 0, 1);
        g.set(2, 0, 128);
        const BinaryMask m = png::decode_mask(png::encode_gray(g));
        CHECK(m.at(0, 0));
        CHECK_FALSE(m.at(1, 0));
        CHECK(m.at(2, 0));
    }
    SUBCASE("RGB frames are reduced to luma") {
        const std::vector<std::uint8_t> rgb = {255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30};
        const GrayImage g = png::decode_gray(png::encode_rgb(rgb, 2, 2));
        CHECK(g == to_grayscale(rgb, 2, 2));
    }
    SUBCASE("garbage is rejected") {
        const std::vector<std::uint8_t> junk = {1, 2, 3, 4, 5};
        CHECK(code_of([&] { png::decode_gray(junk); }) == ErrorCode::InvalidPng);
    }
}
