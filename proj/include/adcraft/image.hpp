#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adcraft/color.hpp"

namespace adcraft {

/// Pixel rectangle (integer, top-left origin).
struct PixelRect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool operator==(const PixelRect&) const = default;
};

/// Straight-alpha RGBA8 raster, row-major.
class Image {
public:
    Image() = default;
    Image(int width, int height, Color fill = Color{0, 0, 0, 0});

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0 || height_ == 0; }

    Color at(int x, int y) const;
    void set(int x, int y, Color c);
    /// Source-over blend of `c` into the pixel.
    void blend(int x, int y, Color c);
    void fill_rect(int x, int y, int w, int h, Color c);

    std::span<const std::uint8_t> bytes() const { return pixels_; }
    std::span<std::uint8_t> bytes() { return pixels_; }

    bool operator==(const Image&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

std::vector<std::uint8_t> encode_png(const Image& img);
/// Decodes any PNG color type into RGBA8; opaque inputs get alpha = 255.
Image decode_png(std::span<const std::uint8_t> data);

Image load_png(const std::filesystem::path& path);
void save_png(const Image& img, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> data);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

Image crop(const Image& img, const PixelRect& rect);
/// Box-filter downscale / bilinear upscale to exactly (w, h).
Image resize(const Image& img, int w, int h);

/// Mean color over a rectangle (clipped to the image), composited on white.
Color mean_color(const Image& img, const PixelRect& rect);

std::string base64_encode(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> base64_decode(std::string_view text);

} // namespace adcraft
