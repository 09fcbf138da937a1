#include "adcraft/layout/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "adcraft/errors.hpp"

namespace adcraft::layout {

using nlohmann::json;

OverflowReport OverflowReport::from_counts(std::size_t total, std::size_t overflowing)
{
    OverflowReport r;
    r.total_elements = total;
    r.overflow_elements = overflowing;
    r.overflow_rate = total > 0 ? static_cast<double>(overflowing) / static_cast<double>(total) : 0.0;
    return r;
}

OverflowReport& OverflowReport::merge(const OverflowReport& other)
{
    total_elements += other.total_elements;
    overflow_elements += other.overflow_elements;
    overflow_ids.insert(overflow_ids.end(), other.overflow_ids.begin(), other.overflow_ids.end());
    overflow_rate = total_elements > 0 ? static_cast<double>(overflow_elements) / static_cast<double>(total_elements) : 0.0;
    return *this;
}

json to_json(const OverflowReport& r)
{
    return json{{"total_elements", r.total_elements},
                {"overflow_elements", r.overflow_elements},
                {"overflow_ids", r.overflow_ids},
                {"overflow_rate", r.overflow_rate},
                {"overflow_percent", std::round(r.percent() * 100.0) / 100.0}};
}

bool box_inside_canvas(const ResolvedBox& box, CanvasSize canvas)
{
    return box.x >= 0.0 && box.y >= 0.0 && box.right() <= canvas.width && box.bottom() <= canvas.height;
}

OverflowReport detect_overflow(const ResolvedLayout& layout)
{
    std::size_t n = 0;
    std::vector<std::string> ids;
    for (const auto& b : layout.boxes)
        if (!box_inside_canvas(b, layout.canvas))
            ids.push_back(b.id);
    n = ids.size();
    auto r = OverflowReport::from_counts(layout.boxes.size(), n);
    r.overflow_ids = std::move(ids);
    return r;
}

namespace {

// Minimal translation of [pos, pos + size] into [lo, hi].
double clamp_axis(double pos, double size, double extent, double margin)
{
    double inset = std::min(margin, std::max(0.0, (extent - size) / 2.0));
    double lo = inset;
    double hi = extent - inset - size;
    if (pos < lo)
        return lo;
    if (pos > hi)
        return hi;
    return pos;
}

} // namespace

ResolvedLayout clamp_into_canvas(const ResolvedLayout& layout, double margin)
{
    ResolvedLayout out = layout;
    for (auto& b : out.boxes) {
        if (box_inside_canvas(b, out.canvas))
            continue;
        if (b.width > out.canvas.width || b.height > out.canvas.height)
            throw UnfixableOverflow(fmt::format("element \"{}\" ({}x{}) is larger than the {}x{} canvas", b.id, b.width,
                                                b.height, out.canvas.width, out.canvas.height));
        b.x = clamp_axis(b.x, b.width, out.canvas.width, margin);
        b.y = clamp_axis(b.y, b.height, out.canvas.height, margin);
    }
    return out;
}

json to_json(const SpacingViolation& v)
{
    json j{{"type", v.type == SpacingViolation::Type::pair ? "pair" : "edge"},
           {"first", v.first},
           {"gap_x", v.gap_x},
           {"gap_y", v.gap_y},
           {"message", v.message}};
    if (!v.second.empty())
        j["second"] = v.second;
    return j;
}

std::vector<SpacingViolation> spacing_diagnostics(const ResolvedLayout& layout, const SpacingThresholds& thresholds)
{
    auto scale = [&](double extent) { return extent < thresholds.scale_below ? extent / thresholds.scale_below : 1.0; };
    const double sx = scale(layout.canvas.width);
    const double sy = scale(layout.canvas.height);
    const double gap_x_min = thresholds.min_gap * sx;
    const double gap_y_min = thresholds.min_gap * sy;
    const double edge_x = thresholds.edge_margin * sx;
    const double edge_y = thresholds.edge_margin * sy;

    std::vector<SpacingViolation> out;
    const auto& boxes = layout.boxes;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t j = i + 1; j < boxes.size(); ++j) {
            const auto& a = boxes[i];
            const auto& b = boxes[j];
            double gx = std::max(0.0, std::max(a.x, b.x) - std::min(a.right(), b.right()));
            double gy = std::max(0.0, std::max(a.y, b.y) - std::min(a.bottom(), b.bottom()));
            if (!(gx < gap_x_min && gy < gap_y_min))
                continue;
            // An element deliberately anchored close to its reference is not a violation.
            auto intentional = [&](const ResolvedBox& child, const ResolvedBox& parent) {
                return child.reference && *child.reference == parent.id && std::fabs(child.offset.dx) < gap_x_min &&
                       std::fabs(child.offset.dy) < gap_y_min;
            };
            if (intentional(a, b) || intentional(b, a))
                continue;
            out.push_back({SpacingViolation::Type::pair, a.id, b.id, gx, gy,
                           fmt::format("\"{}\" and \"{}\" are closer than {:.4g}x{:.4g} px (gaps {:.4g}, {:.4g})", a.id,
                                       b.id, gap_x_min, gap_y_min, gx, gy)});
        }
    }
    for (const auto& b : boxes) {
        double mx = std::min(b.x, layout.canvas.width - b.right());
        double my = std::min(b.y, layout.canvas.height - b.bottom());
        if (mx < edge_x || my < edge_y)
            out.push_back({SpacingViolation::Type::edge, b.id, "", mx, my,
                           fmt::format("\"{}\" is within {:.4g}/{:.4g} px of the canvas edge (margins {:.4g}, {:.4g})",
                                       b.id, edge_x, edge_y, mx, my)});
    }
    return out;
}

double relative_luminance(const Color& c)
{
    auto lin = [](std::uint8_t v) {
        double s = v / 255.0;
        return s <= 0.04045 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
    };
    return 0.2126 * lin(c.r) + 0.7152 * lin(c.g) + 0.0722 * lin(c.b);
}

double contrast_ratio(const Color& fg, const Color& bg)
{
    Color base = bg.opaque() ? bg : composite(bg, Color::white());
    Color top = fg.opaque() ? fg : composite(fg, base);
    double l1 = relative_luminance(top);
    double l2 = relative_luminance(base);
    if (l1 < l2)
        std::swap(l1, l2);
    return (l1 + 0.05) / (l2 + 0.05);
}

json to_json(const ContrastFinding& f)
{
    return json{{"id", f.id},
                {"foreground", f.foreground.to_hex()},
                {"background", f.background.to_hex()},
                {"ratio", std::round(f.ratio * 100.0) / 100.0},
                {"passes", f.passes},
                {"assumed_background", f.assumed_background}};
}

Color label_color(const Style& style)
{
    if (style.label_fill)
        return *style.label_fill;
    return contrast_ratio(Color::white(), style.fill) >= contrast_ratio(Color::black(), style.fill) ? Color::white()
                                                                                                    : Color::black();
}

std::vector<ContrastFinding> contrast_diagnostics(const Blueprint& bp, const ResolvedLayout& layout, const Image* background)
{
    std::vector<ContrastFinding> out;
    for (std::size_t i = 0; i < bp.elements.size(); ++i) {
        const Element& e = bp.elements[i];
        const ResolvedBox* box = layout.find(e.id);
        if (!box)
            continue;
        ContrastFinding f;
        f.id = e.id;
        if (e.kind == ElementKind::cta_button) {
            f.foreground = label_color(e.style);
            f.background = e.style.fill;
        } else if (e.kind == ElementKind::text) {
            f.foreground = e.style.fill;
            double cx = box->x + box->width / 2.0;
            double cy = box->y + box->height / 2.0;
            std::optional<Color> under;
            for (std::size_t j = i; j-- > 0;) {
                const Element& below = bp.elements[j];
                if (below.kind != ElementKind::shape && below.kind != ElementKind::cta_button)
                    continue;
                if (below.kind == ElementKind::shape &&
                    std::get<ShapeContent>(below.content).variant == ShapeVariant::line)
                    continue;
                const ResolvedBox* bb = layout.find(below.id);
                if (bb && cx >= bb->x && cx <= bb->right() && cy >= bb->y && cy <= bb->bottom()) {
                    under = below.style.fill;
                    break;
                }
            }
            if (under) {
                f.background = *under;
            } else if (background && !background->empty()) {
                double kx = static_cast<double>(background->width()) / layout.canvas.width;
                double ky = static_cast<double>(background->height()) / layout.canvas.height;
                f.background = mean_color(*background, PixelRect{static_cast<int>(std::floor(box->x * kx)),
                                                                 static_cast<int>(std::floor(box->y * ky)),
                                                                 std::max(1, static_cast<int>(std::ceil(box->width * kx))),
                                                                 std::max(1, static_cast<int>(std::ceil(box->height * ky)))});
            } else {
                f.background = Color::white();
                f.assumed_background = true;
            }
        } else {
            continue;
        }
        f.ratio = contrast_ratio(f.foreground, f.background);
        f.passes = f.ratio >= min_text_contrast;
        out.push_back(f);
    }
    return out;
}

} // namespace adcraft::layout
