#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace adcraft {

/// 8-bit sRGB color with 8-bit alpha. Serializes as "#RRGGBB" when opaque
/// and "#RRGGBBAA" otherwise, so parse(serialize(c)) == c for every value.
struct Color {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    std::uint8_t alpha = 255;

    static constexpr Color rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b) { return {r, g, b, 255}; }
    static constexpr Color black() { return rgb(0, 0, 0); }
    static constexpr Color white() { return rgb(255, 255, 255); }

    double a() const { return alpha / 255.0; }
    bool opaque() const { return alpha == 255; }

    std::string to_hex() const;

    /// Accepts "#RGB", "#RRGGBB" and "#RRGGBBAA" (case-insensitive).
    static std::optional<Color> parse(std::string_view text);

    bool operator==(const Color&) const = default;
};

/// Source-over composite of `fg` onto an opaque `bg`.
Color composite(const Color& fg, const Color& bg);

} // namespace adcraft
