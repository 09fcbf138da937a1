#include "adcraft/render/svg.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "adcraft/errors.hpp"
#include "adcraft/layout/diagnostics.hpp"

namespace adcraft::render {

std::string format_number(double v)
{
    if (v == 0.0)
        return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string xml_escape(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

namespace {

using layout::ResolvedBox;

std::string num(double v) { return format_number(v); }

std::string href_for(const Asset& a, const SvgOptions& opt)
{
    if (opt.embed_assets)
        return "data:image/png;base64," + base64_encode(a.png);
    return xml_escape(a.filename);
}

std::string geometry_attrs(const Element& e, const ResolvedBox& b)
{
    return fmt::format(R"(id="{}" data-kind="{}" data-x="{}" data-y="{}" data-width="{}" data-height="{}")",
                       xml_escape(e.id), to_string(e.kind), num(b.x), num(b.y), num(b.width), num(b.height));
}

std::string font_attrs(const Style& s, const SvgOptions& opt)
{
    std::string family;
    for (char c : s.font_family)
        if (c != '\'' && c != '"')
            family += c;
    std::string out = fmt::format(R"(font-family="'{}', {}" font-size="{}")", xml_escape(family),
                                  xml_escape(opt.font_fallback), num(s.font_size));
    if (s.font_weight == FontWeight::bold)
        out += R"( font-weight="bold")";
    else if (s.font_weight == FontWeight::black)
        out += R"( font-weight="900")";
    if (s.letter_spacing != 0.0)
        out += fmt::format(R"( letter-spacing="{}")", num(s.letter_spacing));
    return out;
}

std::string paint_attrs(const Style& s)
{
    std::string out;
    if (s.stroke)
        out += fmt::format(R"( stroke="{}" stroke-width="{}")", s.stroke->color.to_hex(), num(s.stroke->width));
    if (s.opacity != 1.0)
        out += fmt::format(R"( opacity="{}")", num(s.opacity));
    return out;
}

// Lines stacked from the first baseline; x is the alignment anchor.
std::string text_body(const std::vector<std::string>& lines, double x, double baseline, double pitch)
{
    if (lines.size() <= 1)
        return lines.empty() ? std::string() : xml_escape(lines.front());
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i)
        out += fmt::format(R"(<tspan x="{}" y="{}">{}</tspan>)", num(x), num(baseline + pitch * static_cast<double>(i)),
                           xml_escape(lines[i]));
    return out;
}

const char* anchor_name(TextAlign a)
{
    switch (a) {
    case TextAlign::center: return "middle";
    case TextAlign::right: return "end";
    case TextAlign::left: break;
    }
    return "start";
}

void emit_text(std::string& out, const Element& e, const ResolvedBox& b, const SvgOptions& opt)
{
    const Style& s = e.style;
    double x = b.x;
    if (s.text_align == TextAlign::center)
        x = b.x + b.width / 2.0;
    else if (s.text_align == TextAlign::right)
        x = b.right();
    double baseline = b.y + opt.baseline_ratio * s.font_size;
    std::vector<std::string> lines = b.lines;
    if (lines.empty() && e.text())
        lines.push_back(*e.text());
    out += fmt::format(R"(  <text {} x="{}" y="{}" {} fill="{}")", geometry_attrs(e, b), num(x), num(baseline),
                       font_attrs(s, opt), s.fill.to_hex());
    if (s.text_align != TextAlign::left)
        out += fmt::format(R"( text-anchor="{}")", anchor_name(s.text_align));
    out += paint_attrs(s);
    out += ">" + text_body(lines, x, baseline, opt.line_height * s.font_size) + "</text>\n";
}

void emit_cta(std::string& out, const Element& e, const ResolvedBox& b, const SvgOptions& opt)
{
    const Style& s = e.style;
    out += fmt::format("  <g {}", geometry_attrs(e, b));
    if (s.opacity != 1.0)
        out += fmt::format(R"( opacity="{}")", num(s.opacity));
    out += ">\n";
    out += fmt::format(R"(    <rect x="{}" y="{}" width="{}" height="{}")", num(b.x), num(b.y), num(b.width),
                       num(b.height));
    if (s.corner_radius > 0.0)
        out += fmt::format(R"( rx="{}")", num(s.corner_radius));
    out += fmt::format(R"( fill="{}")", s.fill.to_hex());
    if (s.stroke)
        out += fmt::format(R"( stroke="{}" stroke-width="{}")", s.stroke->color.to_hex(), num(s.stroke->width));
    out += "/>\n";

    std::vector<std::string> lines = b.lines;
    if (lines.empty() && e.text())
        lines.push_back(*e.text());
    double pitch = opt.line_height * s.font_size;
    double block = pitch * static_cast<double>(std::max<std::size_t>(1, lines.size()));
    // Label block centered vertically; padding is the minimum inset.
    double top = b.y + std::max(s.padding, (b.height - block) / 2.0);
    if (top + block > b.bottom() - s.padding)
        top = b.y + (b.height - block) / 2.0;
    double cx = b.x + b.width / 2.0;
    double baseline = top + (pitch - s.font_size) / 2.0 + opt.baseline_ratio * s.font_size;
    out += fmt::format(R"(    <text x="{}" y="{}" {} fill="{}" text-anchor="middle">{}</text>)", num(cx),
                       num(baseline), font_attrs(s, opt), layout::label_color(s).to_hex(),
                       text_body(lines, cx, baseline, pitch));
    out += "\n  </g>\n";
}

void emit_logo(std::string& out, const Element& e, const ResolvedBox& b, const AssetStore& assets,
               const SvgOptions& opt)
{
    const auto& ac = std::get<AssetContent>(e.content);
    const Asset& a = assets.require(ac.asset);
    out += fmt::format(R"(  <image {} x="{}" y="{}" width="{}" height="{}" preserveAspectRatio="xMidYMid meet")",
                       geometry_attrs(e, b), num(b.x), num(b.y), num(b.width), num(b.height));
    out += paint_attrs(e.style);
    out += fmt::format(R"( xlink:href="{}"/>)", href_for(a, opt));
    out += "\n";
}

void emit_shape(std::string& out, const Element& e, const ResolvedBox& b)
{
    const Style& s = e.style;
    const auto& sc = std::get<ShapeContent>(e.content);
    switch (sc.variant) {
    case ShapeVariant::rectangle:
        out += fmt::format(R"(  <rect {} x="{}" y="{}" width="{}" height="{}")", geometry_attrs(e, b), num(b.x),
                           num(b.y), num(b.width), num(b.height));
        if (s.corner_radius > 0.0)
            out += fmt::format(R"( rx="{}")", num(s.corner_radius));
        out += fmt::format(R"( fill="{}")", s.fill.to_hex());
        break;
    case ShapeVariant::ellipse:
        out += fmt::format(R"(  <ellipse {} cx="{}" cy="{}" rx="{}" ry="{}" fill="{}")", geometry_attrs(e, b),
                           num(b.x + b.width / 2.0), num(b.y + b.height / 2.0), num(b.width / 2.0),
                           num(b.height / 2.0), s.fill.to_hex());
        break;
    case ShapeVariant::line: {
        double w = s.stroke ? s.stroke->width : std::max(1.0, std::min(b.width, b.height));
        Color c = s.stroke ? s.stroke->color : s.fill;
        out += fmt::format(R"(  <line {} x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}")",
                           geometry_attrs(e, b), num(b.x + sc.x1 * b.width), num(b.y + sc.y1 * b.height),
                           num(b.x + sc.x2 * b.width), num(b.y + sc.y2 * b.height), c.to_hex(), num(w));
        if (s.opacity != 1.0)
            out += fmt::format(R"( opacity="{}")", num(s.opacity));
        out += "/>\n";
        return;
    }
    }
    out += paint_attrs(s);
    out += "/>\n";
}

} // namespace

std::string emit_svg(const layout::ResolvedLayout& layout, const Blueprint& bp, const AssetStore& assets,
                     const SvgOptions& options)
{
    const Asset& bg = assets.require(bp.background_ref);
    const int w = bp.canvas.width;
    const int h = bp.canvas.height;

    std::string out;
    out += R"(<?xml version="1.0" encoding="UTF-8"?>)"
           "\n";
    out += fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" )"
                       R"(version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}">)",
                       w, h);
    out += "\n";
    out += fmt::format(R"(  <image id="{}" data-role="background" x="0" y="0" width="{}" height="{}" )"
                       R"(preserveAspectRatio="xMidYMid slice" xlink:href="{}"/>)",
                       xml_escape(bp.background_ref), w, h, href_for(bg, options));
    out += "\n";

    for (const Element& e : bp.elements) {
        const ResolvedBox* b = layout.find(e.id);
        if (!b)
            throw InvalidArgument("layout has no box for element \"" + e.id + "\"");
        switch (e.kind) {
        case ElementKind::text: emit_text(out, e, *b, options); break;
        case ElementKind::cta_button: emit_cta(out, e, *b, options); break;
        case ElementKind::logo: emit_logo(out, e, *b, assets, options); break;
        case ElementKind::shape: emit_shape(out, e, *b); break;
        }
    }
    out += "</svg>\n";
    return out;
}

} // namespace adcraft::render
