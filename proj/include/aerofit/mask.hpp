#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aerofit {

/// 8-bit luminance image, row-major.
class GrayImage {
public:
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::span<const std::uint8_t> data() const noexcept { return data_; }

    std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
    void set(int x, int y, std::uint8_t v) { data_[index(x, y)] = v; }

    bool same_shape(const GrayImage& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

/// Foreground/background bit grid, row-major. Foreground = true.
///
/// Storage is one byte per pixel (0 or 1) so that constructing from raw
/// bytes normalizes any nonzero value to foreground.
class BinaryMask {
public:
    BinaryMask(int width, int height, bool fill = false);
    BinaryMask(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::span<const std::uint8_t> data() const noexcept { return data_; }

    bool at(int x, int y) const { return data_[index(x, y)] != 0; }
    void set(int x, int y, bool fg) { data_[index(x, y)] = fg ? 1 : 0; }

    bool in_bounds(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::size_t foreground_count() const noexcept;
    bool empty() const noexcept { return foreground_count() == 0; }

    bool same_shape(const BinaryMask& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

/// Axis-aligned window inside an image.
struct GuideRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    /// True when the rect is non-degenerate and lies inside a width x height image.
    bool fits(int width, int height) const noexcept {
        return w > 0 && h > 0 && x >= 0 && y >= 0 && x + w <= width && y + h <= height;
    }

    friend bool operator==(const GuideRect&, const GuideRect&) = default;
};

inline constexpr int kDefaultDiffThreshold = 30;
inline constexpr int kDefaultCleanRadius = 1;

/// BT.601 luma: round(0.299 R + 0.587 G + 0.114 B).
GrayImage to_grayscale(std::span<const std::uint8_t> rgb, int width, int height);

/// Foreground iff |frame - background| > diff_threshold.
BinaryMask subtract_background(const GrayImage& background, const GrayImage& frame,
                               int diff_threshold = kDefaultDiffThreshold);

// Square structuring element of side 2*radius+1. Pixels outside the image are
// neutral: ignored by erosion and by dilation alike.
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Opening followed by closing; radius 0 returns the mask unchanged.
BinaryMask clean_mask(const BinaryMask& mask, int radius = kDefaultCleanRadius);

BinaryMask crop_to_guide(const BinaryMask& mask, const GuideRect& rect);

/// Shift content by (dx, dy); pixels moved off the canvas are dropped.
BinaryMask translate(const BinaryMask& mask, int dx, int dy);

}  // namespace aerofit
