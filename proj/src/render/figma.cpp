#include "adcraft/render/figma.hpp"

#include <algorithm>
#include <regex>

#include <fmt/format.h>

#include "adcraft/errors.hpp"
#include "adcraft/layout/diagnostics.hpp"
#include "adcraft/resources.hpp"

namespace adcraft::render {

using nlohmann::ordered_json;

const std::vector<std::string>& figma_required_functions()
{
    static const std::vector<std::string> names{"createBackground", "createText", "createButton", "createLogo",
                                                "createShape"};
    return names;
}

std::string default_figma_template() { return load_resource("figma/plugin_template.js"); }

namespace {

const char* figma_align(TextAlign a)
{
    switch (a) {
    case TextAlign::center: return "CENTER";
    case TextAlign::right: return "RIGHT";
    case TextAlign::left: break;
    }
    return "LEFT";
}

ordered_json geometry(const Element& e, const layout::ResolvedBox& b)
{
    return ordered_json{{"id", e.id}, {"x", b.x}, {"y", b.y}, {"width", b.width}, {"height", b.height}};
}

std::vector<std::string> lines_of(const Element& e, const layout::ResolvedBox& b)
{
    if (!b.lines.empty())
        return b.lines;
    if (const std::string* t = e.text())
        return {*t};
    return {};
}

std::string element_call(const Element& e, const layout::ResolvedBox& b, const AssetStore& assets)
{
    ordered_json spec = geometry(e, b);
    const Style& s = e.style;
    const char* fn = "";
    switch (e.kind) {
    case ElementKind::text:
        fn = "createText";
        spec["lines"] = lines_of(e, b);
        spec["fontFamily"] = s.font_family;
        spec["fontSize"] = s.font_size;
        spec["fontWeight"] = to_string(s.font_weight);
        spec["fill"] = s.fill.to_hex();
        spec["align"] = figma_align(s.text_align);
        spec["letterSpacing"] = s.letter_spacing;
        break;
    case ElementKind::cta_button: {
        fn = "createButton";
        std::string label;
        for (const auto& l : lines_of(e, b))
            label += (label.empty() ? "" : "\n") + l;
        spec["label"] = label;
        spec["fontFamily"] = s.font_family;
        spec["fontSize"] = s.font_size;
        spec["fontWeight"] = to_string(s.font_weight);
        spec["fill"] = s.fill.to_hex();
        spec["labelFill"] = layout::label_color(s).to_hex();
        spec["cornerRadius"] = s.corner_radius;
        break;
    }
    case ElementKind::logo:
        fn = "createLogo";
        spec["image"] = assets.require(std::get<AssetContent>(e.content).asset).filename;
        break;
    case ElementKind::shape: {
        fn = "createShape";
        const auto& sc = std::get<ShapeContent>(e.content);
        spec["variant"] = to_string(sc.variant);
        spec["fill"] = s.fill.to_hex();
        spec["cornerRadius"] = s.corner_radius;
        if (sc.variant == ShapeVariant::line)
            spec["path"] = fmt::format("M {} {} L {} {}", sc.x1 * b.width, sc.y1 * b.height, sc.x2 * b.width,
                                       sc.y2 * b.height);
        break;
    }
    }
    if (s.stroke && e.kind != ElementKind::text && e.kind != ElementKind::logo)
        spec["stroke"] = ordered_json{{"color", s.stroke->color.to_hex()}, {"width", s.stroke->width}};
    spec["opacity"] = s.opacity;
    return fmt::format("  await {}(frame, {});\n", fn, spec.dump());
}

} // namespace

FigmaPlugin emit_figma_plugin(const layout::ResolvedLayout& layout, const Blueprint& bp, const AssetStore& assets,
                              std::string_view template_text, const FigmaOptions& options)
{
    for (auto ph : {figma_image_list_placeholder, figma_elements_placeholder})
        if (template_text.find(ph) == std::string_view::npos)
            throw BadTemplate(fmt::format("template lacks the {} placeholder", ph));
    auto structure = validate_figma_code(template_text);
    if (!structure.has_required_functions)
        throw BadTemplate(fmt::format("template lacks helper function {}", structure.missing_functions.front()));

    FigmaPlugin plugin;
    const Asset& bg = assets.require(bp.background_ref);
    plugin.image_list.push_back(bg.filename);

    std::string calls;
    ordered_json bg_spec{{"id", bp.background_ref},
                         {"image", bg.filename},
                         {"width", bp.canvas.width},
                         {"height", bp.canvas.height}};
    calls += fmt::format("  await createBackground(frame, {});\n", bg_spec.dump());
    for (const Element& e : bp.elements) {
        const layout::ResolvedBox* b = layout.find(e.id);
        if (!b)
            throw InvalidArgument("layout has no box for element \"" + e.id + "\"");
        if (e.kind == ElementKind::logo) {
            const auto& name = assets.require(std::get<AssetContent>(e.content).asset).filename;
            if (std::find(plugin.image_list.begin(), plugin.image_list.end(), name) == plugin.image_list.end())
                plugin.image_list.push_back(name);
        }
        calls += element_call(e, *b, assets);
    }
    if (!calls.empty() && calls.back() == '\n')
        calls.pop_back();

    plugin.code = fill_template(template_text, {{"IMAGE_LIST", nlohmann::json(plugin.image_list).dump()},
                                                {"ELEMENTS", calls},
                                                {"FRAME_NAME", nlohmann::json(options.frame_name).dump()},
                                                {"CANVAS_WIDTH", std::to_string(bp.canvas.width)},
                                                {"CANVAS_HEIGHT", std::to_string(bp.canvas.height)}});

    plugin.manifest = nlohmann::json{{"name", options.plugin_name},
                                     {"id", "banner-import"},
                                     {"api", "1.0.0"},
                                     {"main", "code.js"},
                                     {"editorType", nlohmann::json::array({"figma"})},
                                     {"imageList", plugin.image_list}};
    return plugin;
}

FigmaStructure validate_figma_code(std::string_view code)
{
    FigmaStructure out;
    const std::string text(code);
    for (const auto& fn : figma_required_functions()) {
        std::regex def("function\\s+" + fn + "\\s*\\(");
        if (!std::regex_search(text, def))
            out.missing_functions.push_back(fn);
    }
    out.has_required_functions = out.missing_functions.empty();

    static const std::regex call(R"(await\s+(createBackground|createText|createButton|createLogo|createShape)\s*\(\s*frame\s*,\s*\{"id":"((?:[^"\\]|\\.)*)\")");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), call); it != std::sregex_iterator(); ++it) {
        if ((*it)[1] == "createBackground") {
            ++out.background_calls;
            continue;
        }
        ++out.element_calls;
        out.ids.push_back(nlohmann::json::parse("\"" + (*it)[2].str() + "\"").get<std::string>());
    }
    return out;
}

} // namespace adcraft::render
