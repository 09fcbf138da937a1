#include "adcraft/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>
#include <png.h>

#include "adcraft/errors.hpp"

namespace adcraft {

Image::Image(int width, int height, Color fill) : width_(width), height_(height)
{
    if (width < 0 || height < 0)
        throw InvalidArgument("negative image dimensions");
    pixels_.resize(static_cast<std::size_t>(width) * height * 4);
    for (std::size_t i = 0; i < pixels_.size(); i += 4) {
        pixels_[i] = fill.r;
        pixels_[i + 1] = fill.g;
        pixels_[i + 2] = fill.b;
        pixels_[i + 3] = fill.alpha;
    }
}

Color Image::at(int x, int y) const
{
    auto i = (static_cast<std::size_t>(y) * width_ + x) * 4;
    return Color{pixels_[i], pixels_[i + 1], pixels_[i + 2], pixels_[i + 3]};
}

void Image::set(int x, int y, Color c)
{
    auto i = (static_cast<std::size_t>(y) * width_ + x) * 4;
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
    pixels_[i + 3] = c.alpha;
}

void Image::blend(int x, int y, Color c)
{
    if (c.alpha == 255) {
        set(x, y, c);
        return;
    }
    if (c.alpha == 0)
        return;
    Color dst = at(x, y);
    double sa = c.a();
    double da = dst.a();
    double oa = sa + da * (1.0 - sa);
    auto ch = [&](std::uint8_t s, std::uint8_t d) {
        return static_cast<std::uint8_t>(std::lround((s * sa + d * da * (1.0 - sa)) / oa));
    };
    set(x, y, Color{ch(c.r, dst.r), ch(c.g, dst.g), ch(c.b, dst.b), static_cast<std::uint8_t>(std::lround(oa * 255.0))});
}

void Image::fill_rect(int x, int y, int w, int h, Color c)
{
    int x0 = std::max(0, x), y0 = std::max(0, y);
    int x1 = std::min(width_, x + w), y1 = std::min(height_, y + h);
    for (int yy = y0; yy < y1; ++yy)
        for (int xx = x0; xx < x1; ++xx)
            blend(xx, yy, c);
}

namespace {

struct PngWriteBuffer {
    std::vector<std::uint8_t> data;
};

void png_write_to_vector(png_structp png, png_bytep bytes, png_size_t len)
{
    auto* buf = static_cast<PngWriteBuffer*>(png_get_io_ptr(png));
    buf->data.insert(buf->data.end(), bytes, bytes + len);
}

void png_flush_noop(png_structp) {}

struct PngReadCursor {
    std::span<const std::uint8_t> data;
    std::size_t offset = 0;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t len)
{
    auto* cur = static_cast<PngReadCursor*>(png_get_io_ptr(png));
    if (cur->offset + len > cur->data.size())
        png_error(png, "truncated PNG data");
    std::memcpy(out, cur->data.data() + cur->offset, len);
    cur->offset += len;
}

[[noreturn]] void png_error_throw(png_structp, png_const_charp msg)
{
    throw ImageError(std::string("PNG: ") + msg);
}

void png_warning_ignore(png_structp, png_const_charp) {}

} // namespace

std::vector<std::uint8_t> encode_png(const Image& img)
{
    if (img.empty())
        throw ImageError("cannot encode an empty image");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_throw, png_warning_ignore);
    if (!png)
        throw ImageError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    PngWriteBuffer buf;
    try {
        png_set_write_fn(png, &buf, png_write_to_vector, png_flush_noop);
        png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE,
                     PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        auto bytes = img.bytes();
        for (int y = 0; y < img.height(); ++y) {
            auto* row = const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * img.width() * 4);
            png_write_row(png, row);
        }
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
    return std::move(buf.data);
}

Image decode_png(std::span<const std::uint8_t> data)
{
    if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0)
        throw ImageError("not a PNG image");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_throw, png_warning_ignore);
    if (!png)
        throw ImageError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    PngReadCursor cursor{data, 0};
    Image img;
    try {
        png_set_read_fn(png, &cursor, png_read_from_span);
        png_read_info(png, info);

        auto color_type = png_get_color_type(png, info);
        auto bit_depth = png_get_bit_depth(png, info);
        if (bit_depth == 16)
            png_set_strip_16(png);
        if (color_type == PNG_COLOR_TYPE_PALETTE)
            png_set_palette_to_rgb(png);
        if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
            png_set_expand_gray_1_2_4_to_8(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS))
            png_set_tRNS_to_alpha(png);
        if (color_type == PNG_COLOR_TYPE_RGB || color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_PALETTE)
            png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
            png_set_gray_to_rgb(png);
        png_read_update_info(png, info);

        int w = static_cast<int>(png_get_image_width(png, info));
        int h = static_cast<int>(png_get_image_height(png, info));
        img = Image(w, h);
        auto bytes = img.bytes();
        std::vector<png_bytep> rows(h);
        for (int y = 0; y < h; ++y)
            rows[y] = bytes.data() + static_cast<std::size_t>(y) * w * 4;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ImageError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> data)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ImageError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidArgument("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Image load_png(const std::filesystem::path& path)
{
    return decode_png(read_file_bytes(path));
}

void save_png(const Image& img, const std::filesystem::path& path)
{
    write_file_bytes(path, encode_png(img));
}

Image crop(const Image& img, const PixelRect& rect)
{
    if (rect.x < 0 || rect.y < 0 || rect.width <= 0 || rect.height <= 0 ||
        rect.x + rect.width > img.width() || rect.y + rect.height > img.height())
        throw InvalidArgument("crop rectangle outside image");
    Image out(rect.width, rect.height);
    for (int y = 0; y < rect.height; ++y)
        for (int x = 0; x < rect.width; ++x)
            out.set(x, y, img.at(rect.x + x, rect.y + y));
    return out;
}

namespace {

// Premultiplied accumulation so transparent pixels do not bleed color.
Image box_downscale_axis(const Image& img, int w, int h)
{
    Image out(w, h);
    double sx = static_cast<double>(img.width()) / w;
    double sy = static_cast<double>(img.height()) / h;
    for (int oy = 0; oy < h; ++oy) {
        double y0 = oy * sy, y1 = (oy + 1) * sy;
        for (int ox = 0; ox < w; ++ox) {
            double x0 = ox * sx, x1 = (ox + 1) * sx;
            double acc[4] = {0, 0, 0, 0};
            double area = 0;
            for (int iy = static_cast<int>(y0); iy < static_cast<int>(std::ceil(y1)) && iy < img.height(); ++iy) {
                double wy = std::min<double>(iy + 1, y1) - std::max<double>(iy, y0);
                if (wy <= 0)
                    continue;
                for (int ix = static_cast<int>(x0); ix < static_cast<int>(std::ceil(x1)) && ix < img.width(); ++ix) {
                    double wx = std::min<double>(ix + 1, x1) - std::max<double>(ix, x0);
                    if (wx <= 0)
                        continue;
                    Color c = img.at(ix, iy);
                    double wgt = wx * wy;
                    double a = c.a();
                    acc[0] += c.r * a * wgt;
                    acc[1] += c.g * a * wgt;
                    acc[2] += c.b * a * wgt;
                    acc[3] += a * wgt;
                    area += wgt;
                }
            }
            Color px{};
            if (acc[3] > 0) {
                px.r = static_cast<std::uint8_t>(std::clamp(std::lround(acc[0] / acc[3]), 0L, 255L));
                px.g = static_cast<std::uint8_t>(std::clamp(std::lround(acc[1] / acc[3]), 0L, 255L));
                px.b = static_cast<std::uint8_t>(std::clamp(std::lround(acc[2] / acc[3]), 0L, 255L));
                px.alpha = static_cast<std::uint8_t>(std::clamp(std::lround(acc[3] / area * 255.0), 0L, 255L));
            } else {
                px.alpha = 0;
            }
            out.set(ox, oy, px);
        }
    }
    return out;
}

Image bilinear(const Image& img, int w, int h)
{
    Image out(w, h);
    double sx = static_cast<double>(img.width()) / w;
    double sy = static_cast<double>(img.height()) / h;
    for (int oy = 0; oy < h; ++oy) {
        double fy = std::clamp((oy + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
        int y0 = static_cast<int>(fy);
        int y1 = std::min(y0 + 1, img.height() - 1);
        double ty = fy - y0;
        for (int ox = 0; ox < w; ++ox) {
            double fx = std::clamp((ox + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
            int x0 = static_cast<int>(fx);
            int x1 = std::min(x0 + 1, img.width() - 1);
            double tx = fx - x0;
            Color c00 = img.at(x0, y0), c10 = img.at(x1, y0), c01 = img.at(x0, y1), c11 = img.at(x1, y1);
            auto lerp = [&](std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
                double top = a + (b - a) * tx;
                double bot = c + (d - c) * tx;
                return static_cast<std::uint8_t>(std::clamp(std::lround(top + (bot - top) * ty), 0L, 255L));
            };
            out.set(ox, oy,
                    Color{lerp(c00.r, c10.r, c01.r, c11.r), lerp(c00.g, c10.g, c01.g, c11.g),
                          lerp(c00.b, c10.b, c01.b, c11.b), lerp(c00.alpha, c10.alpha, c01.alpha, c11.alpha)});
        }
    }
    return out;
}

} // namespace

Image resize(const Image& img, int w, int h)
{
    if (w <= 0 || h <= 0)
        throw InvalidArgument("resize target must be positive");
    if (img.empty())
        throw InvalidArgument("cannot resize an empty image");
    if (w == img.width() && h == img.height())
        return img;
    // Downscaling on both axes uses area averaging; anything else bilinear.
    if (w <= img.width() && h <= img.height())
        return box_downscale_axis(img, w, h);
    return bilinear(img, w, h);
}

Color mean_color(const Image& img, const PixelRect& rect)
{
    int x0 = std::clamp(rect.x, 0, img.width()), y0 = std::clamp(rect.y, 0, img.height());
    int x1 = std::clamp(rect.x + rect.width, 0, img.width()), y1 = std::clamp(rect.y + rect.height, 0, img.height());
    double acc[3] = {0, 0, 0};
    std::size_t n = 0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            Color c = composite(img.at(x, y), Color::white());
            acc[0] += c.r;
            acc[1] += c.g;
            acc[2] += c.b;
            ++n;
        }
    if (n == 0)
        return Color::white();
    return Color::rgb(static_cast<std::uint8_t>(std::lround(acc[0] / n)), static_cast<std::uint8_t>(std::lround(acc[1] / n)),
                      static_cast<std::uint8_t>(std::lround(acc[2] / n)));
}

std::string base64_encode(std::span<const std::uint8_t> data)
{
    std::string out(4 * ((data.size() + 2) / 3), '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(), static_cast<int>(data.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text)
{
    std::string clean;
    clean.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            clean.push_back(c);
    if (clean.size() % 4 != 0)
        throw InvalidArgument("base64 length is not a multiple of 4");
    std::vector<std::uint8_t> out(clean.size() / 4 * 3);
    int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(clean.data()), static_cast<int>(clean.size()));
    if (n < 0)
        throw InvalidArgument("invalid base64");
    // EVP_DecodeBlock counts padding bytes as output.
    std::size_t pad = 0;
    if (!clean.empty() && clean.back() == '=')
        ++pad;
    if (clean.size() > 1 && clean[clean.size() - 2] == '=')
        ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

} // namespace adcraft
