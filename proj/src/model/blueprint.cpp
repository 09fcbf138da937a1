#include "adcraft/blueprint.hpp"

#include <array>
#include <utility>

namespace adcraft {

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<ElementKind, 4> kind_names{{
    {ElementKind::logo, "logo"},
    {ElementKind::text, "text"},
    {ElementKind::cta_button, "cta_button"},
    {ElementKind::shape, "shape"},
}};

constexpr NameTable<FontWeight, 3> weight_names{{
    {FontWeight::normal, "normal"},
    {FontWeight::bold, "bold"},
    {FontWeight::black, "black"},
}};

constexpr NameTable<TextAlign, 3> align_names{{
    {TextAlign::left, "left"},
    {TextAlign::center, "center"},
    {TextAlign::right, "right"},
}};

constexpr NameTable<TextRole, 4> role_names{{
    {TextRole::headline, "headline"},
    {TextRole::subheadline, "subheadline"},
    {TextRole::body, "body"},
    {TextRole::cta, "cta"},
}};

constexpr NameTable<ShapeVariant, 3> shape_names{{
    {ShapeVariant::rectangle, "rectangle"},
    {ShapeVariant::ellipse, "ellipse"},
    {ShapeVariant::line, "line"},
}};

constexpr NameTable<NinePoint, 9> anchor_names{{
    {NinePoint::top_left, "top-left"},
    {NinePoint::top_center, "top-center"},
    {NinePoint::top_right, "top-right"},
    {NinePoint::center_left, "center-left"},
    {NinePoint::center, "center"},
    {NinePoint::center_right, "center-right"},
    {NinePoint::bottom_left, "bottom-left"},
    {NinePoint::bottom_center, "bottom-center"},
    {NinePoint::bottom_right, "bottom-right"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value)
{
    for (const auto& [v, name] : table)
        if (v == value)
            return name;
    return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view name)
{
    for (const auto& [v, n] : table)
        if (n == name)
            return v;
    return std::nullopt;
}

} // namespace

std::string_view to_string(ElementKind k) { return name_of(kind_names, k); }
std::string_view to_string(FontWeight w) { return name_of(weight_names, w); }
std::string_view to_string(TextAlign a) { return name_of(align_names, a); }
std::string_view to_string(TextRole r) { return name_of(role_names, r); }
std::string_view to_string(ShapeVariant v) { return name_of(shape_names, v); }
std::string_view to_string(NinePoint p) { return name_of(anchor_names, p); }

std::optional<ElementKind> parse_element_kind(std::string_view s) { return value_of(kind_names, s); }
std::optional<FontWeight> parse_font_weight(std::string_view s) { return value_of(weight_names, s); }
std::optional<TextAlign> parse_text_align(std::string_view s) { return value_of(align_names, s); }
std::optional<TextRole> parse_text_role(std::string_view s) { return value_of(role_names, s); }
std::optional<ShapeVariant> parse_shape_variant(std::string_view s) { return value_of(shape_names, s); }

std::optional<NinePoint> parse_nine_point(std::string_view s)
{
    if (auto p = value_of(anchor_names, s))
        return p;
    // Common model spellings: "top_left", "middle-left", "center-center".
    std::string norm(s);
    for (auto& c : norm)
        if (c == '_' || c == ' ')
            c = '-';
    if (norm == "center-center" || norm == "middle" || norm == "middle-center")
        return NinePoint::center;
    if (norm.rfind("middle-", 0) == 0)
        norm = "center-" + norm.substr(7);
    return value_of(anchor_names, norm);
}

AnchorFraction anchor_fraction(NinePoint p)
{
    switch (p) {
    case NinePoint::top_left: return {0.0, 0.0};
    case NinePoint::top_center: return {0.5, 0.0};
    case NinePoint::top_right: return {1.0, 0.0};
    case NinePoint::center_left: return {0.0, 0.5};
    case NinePoint::center: return {0.5, 0.5};
    case NinePoint::center_right: return {1.0, 0.5};
    case NinePoint::bottom_left: return {0.0, 1.0};
    case NinePoint::bottom_center: return {0.5, 1.0};
    case NinePoint::bottom_right: return {1.0, 1.0};
    }
    return {0.0, 0.0};
}

double default_font_size(std::optional<TextRole> role)
{
    if (!role)
        return 18.0;
    switch (*role) {
    case TextRole::headline: return 40.0;
    case TextRole::subheadline: return 28.0;
    case TextRole::body: return 18.0;
    case TextRole::cta: return 20.0;
    }
    return 18.0;
}

const std::string* Element::text() const
{
    if (auto* t = std::get_if<TextContent>(&content))
        return &t->text;
    return nullptr;
}

const Element* Blueprint::find(std::string_view id) const
{
    for (const auto& e : elements)
        if (e.id == id)
            return &e;
    return nullptr;
}

} // namespace adcraft
