#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "aerofit/mask.hpp"

namespace aerofit::png {

// Decoders accept gray, gray+alpha, RGB, RGBA and palette PNGs at any bit
// depth; alpha is discarded and color is reduced with BT.601 luma.
GrayImage decode_gray(std::span<const std::uint8_t> bytes);
/// Any nonzero luminance is foreground.
BinaryMask decode_mask(std::span<const std::uint8_t> bytes);

/// 8-bit single-channel PNG. Encoder settings are fixed, so equal images
/// always encode to identical bytes.
std::vector<std::uint8_t> encode_gray(const GrayImage& image);
/// Background 0, foreground 255.
std::vector<std::uint8_t> encode_mask(const BinaryMask& mask);
/// 8-bit RGB PNG from interleaved RGB triples.
std::vector<std::uint8_t> encode_rgb(std::span<const std::uint8_t> rgb, int width, int height);

GrayImage read_gray(const std::filesystem::path& path);
BinaryMask read_mask(const std::filesystem::path& path);
void write_gray(const std::filesystem::path& path, const GrayImage& image);
void write_mask(const std::filesystem::path& path, const BinaryMask& mask);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace aerofit::png
