#include "adcraft/color.hpp"

#include <cmath>

#include <fmt/format.h>

namespace adcraft {

namespace {

int hex_digit(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::optional<std::uint8_t> hex_byte(std::string_view s)
{
    int hi = hex_digit(s[0]);
    int lo = hex_digit(s[1]);
    if (hi < 0 || lo < 0)
        return std::nullopt;
    return static_cast<std::uint8_t>(hi * 16 + lo);
}

} // namespace

std::string Color::to_hex() const
{
    if (opaque())
        return fmt::format("#{:02X}{:02X}{:02X}", r, g, b);
    return fmt::format("#{:02X}{:02X}{:02X}{:02X}", r, g, b, alpha);
}

std::optional<Color> Color::parse(std::string_view text)
{
    if (text.empty() || text.front() != '#')
        return std::nullopt;
    text.remove_prefix(1);

    if (text.size() == 3) {
        Color c;
        std::uint8_t* channels[] = {&c.r, &c.g, &c.b};
        for (int i = 0; i < 3; ++i) {
            int d = hex_digit(text[i]);
            if (d < 0)
                return std::nullopt;
            *channels[i] = static_cast<std::uint8_t>(d * 17);
        }
        return c;
    }
    if (text.size() != 6 && text.size() != 8)
        return std::nullopt;

    Color c;
    std::uint8_t* channels[] = {&c.r, &c.g, &c.b, &c.alpha};
    for (std::size_t i = 0; i * 2 < text.size(); ++i) {
        auto byte = hex_byte(text.substr(i * 2, 2));
        if (!byte)
            return std::nullopt;
        *channels[i] = *byte;
    }
    return c;
}

Color composite(const Color& fg, const Color& bg)
{
    double a = fg.a();
    auto mix = [a](std::uint8_t f, std::uint8_t b) {
        return static_cast<std::uint8_t>(std::lround(f * a + b * (1.0 - a)));
    };
    return Color::rgb(mix(fg.r, bg.r), mix(fg.g, bg.g), mix(fg.b, bg.b));
}

} // namespace adcraft
