#include "aerofit/mask.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "aerofit/error.hpp"

namespace aerofit {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::OutOfBounds: return "OutOfBounds";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::EmptyUnion: return "EmptyUnion";
        case ErrorCode::EmptyTemplateSet: return "EmptyTemplateSet";
        case ErrorCode::EmptyMask: return "EmptyMask";
        case ErrorCode::MissingManifest: return "MissingManifest";
        case ErrorCode::DuplicateSequence: return "DuplicateSequence";
        case ErrorCode::InvalidRoutine: return "InvalidRoutine";
        case ErrorCode::InvalidPng: return "InvalidPng";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::UndefinedMetric: return "UndefinedMetric";
        case ErrorCode::EmptyCurve: return "EmptyCurve";
        case ErrorCode::UnknownRoutine: return "UnknownRoutine";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::UnknownTemplate: return "UnknownTemplate";
        case ErrorCode::WrongPhase: return "WrongPhase";
        case ErrorCode::GenerationCheckFailed: return "GenerationCheckFailed";
    }
    return "Unknown";
}

namespace {

std::size_t pixel_count(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "image dimensions must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height));
    }
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

std::string shape_str(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

// One 1-D pass of a square structuring element. With `all` set a pixel stays
// foreground only if every in-bounds neighbor in [i-r, i+r] is foreground
// (erosion); otherwise any foreground neighbor suffices (dilation).
// `stride` walks along the line, `count` is the line length.
void morph_line(const std::uint8_t* src, std::uint8_t* dst, int count, std::size_t stride,
                int radius, bool all, std::vector<int>& prefix) {
    prefix.assign(static_cast<std::size_t>(count) + 1, 0);
    for (int i = 0; i < count; ++i) {
        prefix[i + 1] = prefix[i] + (src[i * stride] != 0 ? 1 : 0);
    }
    for (int i = 0; i < count; ++i) {
        const int lo = std::max(0, i - radius);
        const int hi = std::min(count - 1, i + radius);
        const int fg = prefix[hi + 1] - prefix[lo];
        const bool on = all ? fg == hi - lo + 1 : fg > 0;
        dst[i * stride] = on ? 1 : 0;
    }
}

BinaryMask morph(const BinaryMask& mask, int radius, bool all) {
    if (radius < 0) {
        throw Error(ErrorCode::InvalidArgument, "morphology radius must be >= 0");
    }
    if (radius == 0) return mask;
    const int w = mask.width();
    const int h = mask.height();
    const auto src = mask.data();
    std::vector<std::uint8_t> tmp(src.size());
    std::vector<std::uint8_t> out(src.size());
    std::vector<int> prefix;
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        morph_line(src.data() + row, tmp.data() + row, w, 1, radius, all, prefix);
    }
    for (int x = 0; x < w; ++x) {
        morph_line(tmp.data() + x, out.data() + x, h, static_cast<std::size_t>(w), radius, all,
                   prefix);
    }
    return BinaryMask(w, h, std::move(out));
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), data_(pixel_count(width, height), fill) {}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != pixel_count(width, height)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "gray data length " + std::to_string(data_.size()) + " does not match " +
                        shape_str(width, height));
    }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height), data_(pixel_count(width, height), fill ? 1 : 0) {}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != pixel_count(width, height)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "mask data length " + std::to_string(data_.size()) + " does not match " +
                        shape_str(width, height));
    }
    for (auto& v : data_) v = v != 0 ? 1 : 0;
}

std::size_t BinaryMask::foreground_count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

GrayImage to_grayscale(std::span<const std::uint8_t> rgb, int width, int height) {
    const std::size_t n = pixel_count(width, height);
    if (rgb.size() != 3 * n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "rgb data length " + std::to_string(rgb.size()) + " does not match 3 x " +
                        shape_str(width, height));
    }
    std::vector<std::uint8_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Weights scaled by 1000 so rounding (half up) is exact.
        const int scaled = 299 * rgb[3 * i] + 587 * rgb[3 * i + 1] + 114 * rgb[3 * i + 2];
        out[i] = static_cast<std::uint8_t>(std::min((scaled + 500) / 1000, 255));
    }
    return GrayImage(width, height, std::move(out));
}

BinaryMask subtract_background(const GrayImage& background, const GrayImage& frame,
                               int diff_threshold) {
    if (!background.same_shape(frame)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "background " + shape_str(background.width(), background.height()) +
                        " vs frame " + shape_str(frame.width(), frame.height()));
    }
    const auto bg = background.data();
    const auto fr = frame.data();
    std::vector<std::uint8_t> out(bg.size());
    for (std::size_t i = 0; i < bg.size(); ++i) {
        out[i] = std::abs(int{fr[i]} - int{bg[i]}) > diff_threshold ? 1 : 0;
    }
    return BinaryMask(frame.width(), frame.height(), std::move(out));
}

BinaryMask erode(const BinaryMask& mask, int radius) { return morph(mask, radius, true); }

BinaryMask dilate(const BinaryMask& mask, int radius) { return morph(mask, radius, false); }

BinaryMask clean_mask(const BinaryMask& mask, int radius) {
    if (radius == 0) return mask;
    const BinaryMask opened = dilate(erode(mask, radius), radius);
    return erode(dilate(opened, radius), radius);
}

BinaryMask crop_to_guide(const BinaryMask& mask, const GuideRect& rect) {
    if (!rect.fits(mask.width(), mask.height())) {
        throw Error(ErrorCode::OutOfBounds,
                    "guide (" + std::to_string(rect.x) + "," + std::to_string(rect.y) + "," +
                        std::to_string(rect.w) + "," + std::to_string(rect.h) +
                        ") exceeds mask " + shape_str(mask.width(), mask.height()));
    }
    BinaryMask out(rect.w, rect.h);
    for (int y = 0; y < rect.h; ++y) {
        for (int x = 0; x < rect.w; ++x) out.set(x, y, mask.at(rect.x + x, rect.y + y));
    }
    return out;
}

BinaryMask translate(const BinaryMask& mask, int dx, int dy) {
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask.at(x, y) && out.in_bounds(x + dx, y + dy)) out.set(x + dx, y + dy, true);
        }
    }
    return out;
}

}  // namespace aerofit
