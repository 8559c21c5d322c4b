#pragma once

// Synthetic camera frames for session tests: a noisy static background and
// composites that paint a silhouette into it at the guide position.

#include <algorithm>
#include <cstdint>
#include <random>

#include "aerofit/mask.hpp"

namespace frames {

inline aerofit::GrayImage background(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> v(20, 100);
    aerofit::GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.set(x, y, static_cast<std::uint8_t>(v(rng)));
    return img;
}

/// Background with `silhouette` (guide-sized) brightened by 120 at (gx, gy).
inline aerofit::GrayImage composite(const aerofit::GrayImage& bg, const aerofit::BinaryMask& silhouette,
                                    int gx, int gy) {
    aerofit::GrayImage img = bg;
    for (int y = 0; y < silhouette.height(); ++y)
        for (int x = 0; x < silhouette.width(); ++x)
            if (silhouette.at(x, y)) {
                const int v = std::min(255, bg.at(gx + x, gy + y) + 120);
                img.set(gx + x, gy + y, static_cast<std::uint8_t>(v));
            }
    return img;
}

}  // namespace frames
