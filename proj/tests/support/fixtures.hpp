#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "adcraft/blueprint.hpp"
#include "adcraft/image.hpp"

namespace fixtures {

using namespace adcraft;

inline Element text_el(std::string id, std::string text, PositionSpec pos, SizeSpec size = IntrinsicSize{},
                       std::optional<TextRole> role = std::nullopt)
{
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::text;
    e.content = TextContent{std::move(text), role};
    e.style.font_size = default_font_size(role);
    e.position = std::move(pos);
    e.size = std::move(size);
    return e;
}

inline Element box_el(std::string id, PositionSpec pos, double w, double h, Color fill = Color::rgb(200, 200, 200))
{
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::shape;
    e.content = ShapeContent{};
    e.style.fill = fill;
    e.position = std::move(pos);
    e.size = ExplicitSize{w, h};
    return e;
}

inline Element cta_el(std::string id, std::string label, PositionSpec pos, Color fill, double radius = 8)
{
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::cta_button;
    e.content = TextContent{std::move(label), TextRole::cta};
    e.style.font_size = 20;
    e.style.font_weight = FontWeight::bold;
    e.style.fill = fill;
    e.style.corner_radius = radius;
    e.style.padding = 12;
    e.position = std::move(pos);
    e.size = IntrinsicSize{};
    return e;
}

inline Element logo_el(std::string id, PositionSpec pos, double target_height, std::string asset = "logo")
{
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::logo;
    e.content = AssetContent{std::move(asset)};
    e.position = std::move(pos);
    IntrinsicSize s;
    s.target_height = target_height;
    e.size = s;
    return e;
}

inline RelativePosition rel(std::string ref, NinePoint ra, NinePoint sa, double dx = 0, double dy = 0)
{
    return RelativePosition{std::move(ref), ra, sa, Offset{dx, dy}};
}

/// Six elements on 300x250 covering every kind, relative chains and a logo.
inline Blueprint six_element_fixture()
{
    Blueprint bp;
    bp.canvas = {300, 250};
    bp.layout_pattern = "Centered";
    bp.rationale = "fixture";
    bp.elements.push_back(box_el("panel", AbsolutePosition{20, 20}, 260, 210, Color{255, 255, 255, 204}));
    bp.elements.push_back(logo_el("logo", rel("canvas", NinePoint::top_center, NinePoint::top_center, 0, 30), 32));
    bp.elements.push_back(text_el("headline", "Fresh Coffee Daily",
                                  rel("logo", NinePoint::bottom_center, NinePoint::top_center, 0, 16),
                                  IntrinsicSize{}, TextRole::headline));
    bp.elements.back().style.font_size = 24;
    bp.elements.back().style.font_weight = FontWeight::bold;
    bp.elements.back().style.text_align = TextAlign::center;
    bp.elements.back().style.fill = Color::rgb(0x4A, 0x2E, 0x2B);
    bp.elements.push_back(text_el("subline", "Roasted in small batches & <served> warm",
                                  rel("headline", NinePoint::bottom_center, NinePoint::top_center, 0, 8),
                                  IntrinsicSize{std::optional<double>(200), {}, {}}, TextRole::body));
    bp.elements.back().style.font_size = 14;
    bp.elements.back().style.text_align = TextAlign::center;
    bp.elements.push_back(cta_el("cta", "Shop Now", rel("canvas", NinePoint::bottom_center, NinePoint::bottom_center, 0, -30),
                                 Color::rgb(0x4A, 0x2E, 0x2B)));
    Element line = box_el("divider", rel("cta", NinePoint::top_center, NinePoint::bottom_center, 0, -6), 120, 2,
                          Color::rgb(0x4A, 0x2E, 0x2B));
    std::get<ShapeContent>(line.content).variant = ShapeVariant::line;
    bp.elements.push_back(line);
    return bp;
}

/// Deterministic RGBA logo with a transparent margin.
inline Image logo_image(int w = 64, int h = 32)
{
    Image img(w, h);
    for (int y = 4; y < h - 4; ++y)
        for (int x = 4; x < w - 4; ++x)
            img.set(x, y, Color::rgb(static_cast<std::uint8_t>(40 + x), 90, static_cast<std::uint8_t>(150 + y)));
    return img;
}

inline Image gradient_image(int w, int h)
{
    Image img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.set(x, y, Color::rgb(static_cast<std::uint8_t>(x * 255 / std::max(1, w - 1)), 120,
                                     static_cast<std::uint8_t>(y * 255 / std::max(1, h - 1))));
    return img;
}

inline std::filesystem::path temp_dir(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("adcraft-test-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline std::filesystem::path data_dir() { return std::filesystem::path(ADCRAFT_TEST_DATA_DIR); }

} // namespace fixtures
