#include "aerofit/png_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "aerofit/error.hpp"

namespace aerofit::png {

namespace {

// RAII over libpng's simplified-API control block.
struct ImageGuard {
    png_image image{};
    ImageGuard() {
        image.version = PNG_IMAGE_VERSION;
    }
    ~ImageGuard() { png_image_free(&image); }
    ImageGuard(const ImageGuard&) = delete;
    ImageGuard& operator=(const ImageGuard&) = delete;
};

std::vector<std::uint8_t> encode(const std::uint8_t* pixels, int width, int height,
                                 png_uint_32 format) {
    ImageGuard g;
    g.image.width = static_cast<png_uint_32>(width);
    g.image.height = static_cast<png_uint_32>(height);
    g.image.format = format;
    png_alloc_size_t size = 0;
    if (!png_image_write_get_memory_size(g.image, size, 0, pixels, 0, nullptr)) {
        throw Error(ErrorCode::InvalidPng, std::string("encode failed: ") + g.image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&g.image, out.data(), &size, 0, pixels, 0, nullptr)) {
        throw Error(ErrorCode::InvalidPng, std::string("encode failed: ") + g.image.message);
    }
    out.resize(size);
    return out;
}

}  // namespace

GrayImage decode_gray(std::span<const std::uint8_t> bytes) {
    ImageGuard g;
    if (!png_image_begin_read_from_memory(&g.image, bytes.data(), bytes.size())) {
        throw Error(ErrorCode::InvalidPng, std::string("cannot decode PNG: ") + g.image.message);
    }
    const int w = static_cast<int>(g.image.width);
    const int h = static_cast<int>(g.image.height);
    const bool color = (g.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    g.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(g.image));
    if (!png_image_finish_read(&g.image, nullptr, pixels.data(), 0, nullptr)) {
        throw Error(ErrorCode::InvalidPng, std::string("cannot decode PNG: ") + g.image.message);
    }
    if (color) return to_grayscale(pixels, w, h);
    return GrayImage(w, h, std::move(pixels));
}

BinaryMask decode_mask(std::span<const std::uint8_t> bytes) {
    const GrayImage gray = decode_gray(bytes);
    const auto d = gray.data();
    return BinaryMask(gray.width(), gray.height(), std::vector<std::uint8_t>(d.begin(), d.end()));
}

std::vector<std::uint8_t> encode_gray(const GrayImage& image) {
    return encode(image.data().data(), image.width(), image.height(), PNG_FORMAT_GRAY);
}

std::vector<std::uint8_t> encode_mask(const BinaryMask& mask) {
    std::vector<std::uint8_t> pixels(mask.data().size());
    for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = mask.data()[i] ? 255 : 0;
    return encode(pixels.data(), mask.width(), mask.height(), PNG_FORMAT_GRAY);
}

std::vector<std::uint8_t> encode_rgb(std::span<const std::uint8_t> rgb, int width, int height) {
    if (width <= 0 || height <= 0 ||
        rgb.size() != 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw Error(ErrorCode::DimensionMismatch, "rgb buffer does not match dimensions");
    }
    return encode(rgb.data(), width, height, PNG_FORMAT_RGB);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::Io, "read failed for " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

GrayImage read_gray(const std::filesystem::path& path) {
    try {
        return decode_gray(read_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidPng) throw Error(e.code(), path.string() + ": " + e.detail());
        throw;
    }
}

BinaryMask read_mask(const std::filesystem::path& path) {
    try {
        return decode_mask(read_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidPng) throw Error(e.code(), path.string() + ": " + e.detail());
        throw;
    }
}

void write_gray(const std::filesystem::path& path, const GrayImage& image) {
    write_file(path, encode_gray(image));
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask) {
    write_file(path, encode_mask(mask));
}

}  // namespace aerofit::png
