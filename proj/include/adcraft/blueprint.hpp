#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcraft/color.hpp"

namespace adcraft {

enum class ElementKind { logo, text, cta_button, shape };
enum class FontWeight { normal, bold, black };
enum class TextAlign { left, center, right };
enum class TextRole { headline, subheadline, body, cta };
enum class ShapeVariant { rectangle, ellipse, line };

/// The nine anchor points of a box.
enum class NinePoint {
    top_left,
    top_center,
    top_right,
    center_left,
    center,
    center_right,
    bottom_left,
    bottom_center,
    bottom_right,
};

std::string_view to_string(ElementKind k);
std::string_view to_string(FontWeight w);
std::string_view to_string(TextAlign a);
std::string_view to_string(TextRole r);
std::string_view to_string(ShapeVariant v);
std::string_view to_string(NinePoint p);

std::optional<ElementKind> parse_element_kind(std::string_view s);
std::optional<FontWeight> parse_font_weight(std::string_view s);
std::optional<TextAlign> parse_text_align(std::string_view s);
std::optional<TextRole> parse_text_role(std::string_view s);
std::optional<ShapeVariant> parse_shape_variant(std::string_view s);
std::optional<NinePoint> parse_nine_point(std::string_view s);

/// Horizontal and vertical fraction of the box an anchor sits at: 0, 0.5 or 1.
struct AnchorFraction {
    double fx;
    double fy;
};
AnchorFraction anchor_fraction(NinePoint p);

/// Default font size for a typographic role (headline 40, subheadline 28,
/// body 18, cta 20); each sits inside the designer prompt's stated range.
double default_font_size(std::optional<TextRole> role);

struct TextContent {
    std::string text;
    std::optional<TextRole> role;
    bool operator==(const TextContent&) const = default;
};

struct AssetContent {
    std::string asset;
    bool operator==(const AssetContent&) const = default;
};

/// Line endpoints are fractions of the element box.
struct ShapeContent {
    ShapeVariant variant = ShapeVariant::rectangle;
    double x1 = 0.0;
    double y1 = 0.5;
    double x2 = 1.0;
    double y2 = 0.5;
    bool operator==(const ShapeContent&) const = default;
};

using Content = std::variant<TextContent, AssetContent, ShapeContent>;

struct Stroke {
    Color color;
    double width = 1.0;
    bool operator==(const Stroke&) const = default;
};

struct Style {
    std::string font_family = "Helvetica";
    double font_size = 18.0;
    FontWeight font_weight = FontWeight::normal;
    Color fill = Color::black();
    std::optional<Stroke> stroke;
    double corner_radius = 0.0;
    double opacity = 1.0;
    TextAlign text_align = TextAlign::left;
    double letter_spacing = 0.0;
    double padding = 0.0;
    /// CTA label color; when unset the renderer picks black or white by contrast.
    std::optional<Color> label_fill;

    bool operator==(const Style&) const = default;
};

struct Offset {
    double dx = 0.0;
    double dy = 0.0;
    bool operator==(const Offset&) const = default;
};

struct AbsolutePosition {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const AbsolutePosition&) const = default;
};

inline constexpr std::string_view canvas_ref = "canvas";

struct RelativePosition {
    std::string reference{canvas_ref};
    NinePoint ref_anchor = NinePoint::top_left;
    NinePoint self_anchor = NinePoint::top_left;
    Offset offset;
    bool operator==(const RelativePosition&) const = default;
};

using PositionSpec = std::variant<AbsolutePosition, RelativePosition>;

struct ExplicitSize {
    double width = 0.0;
    double height = 0.0;
    bool operator==(const ExplicitSize&) const = default;
};

/// Text and CTA measure their content (optionally wrapped at `max_width`);
/// logos scale from the asset aspect ratio given one target dimension.
struct IntrinsicSize {
    std::optional<double> max_width;
    std::optional<double> target_width;
    std::optional<double> target_height;
    bool operator==(const IntrinsicSize&) const = default;
};

using SizeSpec = std::variant<ExplicitSize, IntrinsicSize>;

struct Element {
    std::string id;
    ElementKind kind = ElementKind::text;
    Content content;
    Style style;
    PositionSpec position;
    SizeSpec size;
    /// Unknown fields from the source document, kept verbatim.
    nlohmann::json extras = nlohmann::json::object();

    const std::string* text() const;
    const RelativePosition* relative() const { return std::get_if<RelativePosition>(&position); }

    bool operator==(const Element&) const = default;
};

struct CanvasSize {
    int width = 0;
    int height = 0;
    bool operator==(const CanvasSize&) const = default;
};

inline constexpr int blueprint_version = 1;

/// Element order is z-order: later elements paint over earlier ones.
struct Blueprint {
    CanvasSize canvas;
    std::string background_ref = "background";
    std::vector<Element> elements;
    std::string layout_pattern;
    std::string rationale;
    nlohmann::json extras = nlohmann::json::object();

    const Element* find(std::string_view id) const;

    bool operator==(const Blueprint&) const = default;
};

} // namespace adcraft
