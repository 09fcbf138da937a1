#include "adcraft/blueprint_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace adcraft {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_violations(const std::vector<Violation>& violations)
{
    std::string out;
    for (const auto& v : violations) {
        out += "- [" + v.code + "] " + v.to_string() + "\n";
    }
    return out;
}

SchemaViolation::SchemaViolation(std::vector<Violation> violations)
    : Error("SchemaViolation", "blueprint failed validation:\n" + format_violations(violations)),
      violations_(std::move(violations))
{
}

namespace {

const std::set<std::string> blueprint_keys{"blueprint_version", "canvas",   "background_ref",
                                           "elements",          "layout_pattern", "rationale"};
const std::set<std::string> element_keys{"id", "kind", "content", "style", "position", "size"};

class Reader {
public:
    std::vector<Violation> violations;

    void add(std::string code, std::string path, std::string message)
    {
        violations.push_back({std::move(code), std::move(path), std::move(message)});
    }

    const json* field(const json& obj, const std::string& key, const std::string& path, bool required)
    {
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) {
            if (required)
                add("missing_field", path + "/" + key, "required field '" + key + "' is missing");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path, bool required)
    {
        const json* v = field(obj, key, path, required);
        if (!v)
            return std::nullopt;
        if (!v->is_number()) {
            add("wrong_type", path + "/" + key, "expected a number");
            return std::nullopt;
        }
        double d = v->get<double>();
        if (!std::isfinite(d)) {
            add("non_finite", path + "/" + key, "number is not finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path, bool required)
    {
        const json* v = field(obj, key, path, required);
        if (!v)
            return std::nullopt;
        if (!v->is_string()) {
            add("wrong_type", path + "/" + key, "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<Color> color(const json& obj, const std::string& key, const std::string& path, bool required)
    {
        auto s = string(obj, key, path, required);
        if (!s)
            return std::nullopt;
        auto c = Color::parse(*s);
        if (!c)
            add("invalid_value", path + "/" + key, "'" + *s + "' is not a #RRGGBB[AA] color");
        return c;
    }

    template <typename E, typename Parse>
    std::optional<E> enumeration(const json& obj, const std::string& key, const std::string& path, bool required,
                                 Parse parse, const char* code = "invalid_value")
    {
        auto s = string(obj, key, path, required);
        if (!s)
            return std::nullopt;
        auto e = parse(*s);
        if (!e)
            add(code, path + "/" + key, "unknown value '" + *s + "'");
        return e;
    }

    void require_range(std::optional<double> v, double lo, double hi, const std::string& path, const char* what)
    {
        if (v && (*v < lo || *v > hi))
            add("out_of_range", path, fmt::format("{} must be within [{}, {}]", what, lo, hi));
    }

    void require_positive(std::optional<double> v, const std::string& path, const char* what)
    {
        if (v && !(*v > 0))
            add("out_of_range", path, fmt::format("{} must be > 0", what));
    }
};

Style read_style(Reader& r, const json* obj, const std::string& path, std::optional<TextRole> role)
{
    Style s;
    s.font_size = default_font_size(role);
    if (!obj)
        return s;
    if (!obj->is_object()) {
        r.add("wrong_type", path, "style must be an object");
        return s;
    }
    if (auto v = r.string(*obj, "font_family", path, false))
        s.font_family = *v;
    if (auto v = r.number(*obj, "font_size", path, false)) {
        r.require_positive(v, path + "/font_size", "font_size");
        s.font_size = *v;
    }
    if (auto v = r.enumeration<FontWeight>(*obj, "font_weight", path, false, parse_font_weight))
        s.font_weight = *v;
    if (auto v = r.color(*obj, "fill", path, false))
        s.fill = *v;
    if (const json* st = r.field(*obj, "stroke", path, false)) {
        if (!st->is_object()) {
            r.add("wrong_type", path + "/stroke", "stroke must be an object");
        } else {
            Stroke stroke;
            if (auto c = r.color(*st, "color", path + "/stroke", true))
                stroke.color = *c;
            if (auto w = r.number(*st, "width", path + "/stroke", false)) {
                r.require_range(w, 0, 1e6, path + "/stroke/width", "stroke width");
                stroke.width = *w;
            }
            s.stroke = stroke;
        }
    }
    if (auto v = r.number(*obj, "corner_radius", path, false)) {
        r.require_range(v, 0, 1e9, path + "/corner_radius", "corner_radius");
        s.corner_radius = *v;
    }
    if (auto v = r.number(*obj, "opacity", path, false)) {
        r.require_range(v, 0, 1, path + "/opacity", "opacity");
        s.opacity = *v;
    }
    if (auto v = r.enumeration<TextAlign>(*obj, "text_align", path, false, parse_text_align))
        s.text_align = *v;
    if (auto v = r.number(*obj, "letter_spacing", path, false))
        s.letter_spacing = *v;
    if (auto v = r.number(*obj, "padding", path, false)) {
        r.require_range(v, 0, 1e9, path + "/padding", "padding");
        s.padding = *v;
    }
    if (auto v = r.color(*obj, "label_fill", path, false))
        s.label_fill = *v;
    return s;
}

std::optional<Content> read_content(Reader& r, const json* obj, ElementKind kind, const std::string& path)
{
    if (!obj)
        return std::nullopt;
    switch (kind) {
    case ElementKind::text:
    case ElementKind::cta_button: {
        TextContent tc;
        if (obj->is_string()) {
            tc.text = obj->get<std::string>();
        } else if (obj->is_object()) {
            if (auto t = r.string(*obj, "text", path, true))
                tc.text = *t;
            if (auto role = r.enumeration<TextRole>(*obj, "role", path, false, parse_text_role))
                tc.role = role;
        } else {
            r.add("wrong_type", path, "text content must be a string or an object");
            return std::nullopt;
        }
        if (tc.text.empty())
            r.add("invalid_value", path + "/text", "text content must be non-empty");
        return tc;
    }
    case ElementKind::logo: {
        AssetContent ac;
        if (obj->is_string()) {
            ac.asset = obj->get<std::string>();
        } else if (obj->is_object()) {
            if (auto a = r.string(*obj, "asset", path, true))
                ac.asset = *a;
        } else {
            r.add("wrong_type", path, "logo content must reference an asset");
            return std::nullopt;
        }
        if (ac.asset.empty())
            r.add("invalid_value", path + "/asset", "asset reference must be non-empty");
        return ac;
    }
    case ElementKind::shape: {
        if (!obj->is_object()) {
            r.add("wrong_type", path, "shape content must be an object");
            return std::nullopt;
        }
        ShapeContent sc;
        if (auto v = r.enumeration<ShapeVariant>(*obj, "variant", path, true, parse_shape_variant))
            sc.variant = *v;
        if (auto v = r.number(*obj, "x1", path, false))
            sc.x1 = *v;
        if (auto v = r.number(*obj, "y1", path, false))
            sc.y1 = *v;
        if (auto v = r.number(*obj, "x2", path, false))
            sc.x2 = *v;
        if (auto v = r.number(*obj, "y2", path, false))
            sc.y2 = *v;
        return sc;
    }
    }
    return std::nullopt;
}

std::optional<PositionSpec> read_position(Reader& r, const json* obj, const std::string& path)
{
    if (!obj)
        return std::nullopt;
    if (!obj->is_object()) {
        r.add("wrong_type", path, "position must be an object");
        return std::nullopt;
    }
    auto mode = r.string(*obj, "mode", path, true);
    if (!mode)
        return std::nullopt;
    if (*mode == "absolute") {
        auto x = r.number(*obj, "x", path, true);
        auto y = r.number(*obj, "y", path, true);
        if (!x || !y)
            return std::nullopt;
        return AbsolutePosition{*x, *y};
    }
    if (*mode == "relative") {
        RelativePosition rel;
        auto ref = r.string(*obj, "reference", path, true);
        auto ra = r.enumeration<NinePoint>(*obj, "ref_anchor", path, true, parse_nine_point);
        auto sa = r.enumeration<NinePoint>(*obj, "self_anchor", path, true, parse_nine_point);
        if (const json* off = r.field(*obj, "offset", path, false)) {
            if (!off->is_object()) {
                r.add("wrong_type", path + "/offset", "offset must be an object");
            } else {
                if (auto dx = r.number(*off, "dx", path + "/offset", false))
                    rel.offset.dx = *dx;
                if (auto dy = r.number(*off, "dy", path + "/offset", false))
                    rel.offset.dy = *dy;
            }
        }
        if (!ref || !ra || !sa)
            return std::nullopt;
        if (ref->empty()) {
            r.add("invalid_value", path + "/reference", "reference must be non-empty");
            return std::nullopt;
        }
        rel.reference = *ref;
        rel.ref_anchor = *ra;
        rel.self_anchor = *sa;
        return rel;
    }
    r.add("invalid_value", path + "/mode", "position mode must be 'absolute' or 'relative'");
    return std::nullopt;
}

std::optional<SizeSpec> read_size(Reader& r, const json* obj, const std::string& path)
{
    if (!obj)
        return std::nullopt;
    if (!obj->is_object()) {
        r.add("wrong_type", path, "size must be an object");
        return std::nullopt;
    }
    auto mode = r.string(*obj, "mode", path, true);
    if (!mode)
        return std::nullopt;
    if (*mode == "explicit") {
        auto w = r.number(*obj, "width", path, true);
        auto h = r.number(*obj, "height", path, true);
        r.require_positive(w, path + "/width", "width");
        r.require_positive(h, path + "/height", "height");
        if (!w || !h)
            return std::nullopt;
        return ExplicitSize{*w, *h};
    }
    if (*mode == "intrinsic") {
        IntrinsicSize is;
        is.max_width = r.number(*obj, "max_width", path, false);
        is.target_width = r.number(*obj, "target_width", path, false);
        is.target_height = r.number(*obj, "target_height", path, false);
        r.require_positive(is.max_width, path + "/max_width", "max_width");
        r.require_positive(is.target_width, path + "/target_width", "target_width");
        r.require_positive(is.target_height, path + "/target_height", "target_height");
        return is;
    }
    r.add("invalid_value", path + "/mode", "size mode must be 'explicit' or 'intrinsic'");
    return std::nullopt;
}

json collect_extras(const json& obj, const std::set<std::string>& known)
{
    json extras = json::object();
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            extras[it.key()] = it.value();
    return extras;
}

void check_kind_consistency(Reader& r, const Element& e, const std::string& path)
{
    if (e.kind == ElementKind::shape && std::holds_alternative<IntrinsicSize>(e.size))
        r.add("invalid_value", path + "/size", "shape elements require an explicit size");
    if (e.kind == ElementKind::logo) {
        if (auto* is = std::get_if<IntrinsicSize>(&e.size)) {
            if (is->target_width.has_value() == is->target_height.has_value())
                r.add("invalid_value", path + "/size",
                      "intrinsic logo size needs exactly one of target_width / target_height");
        }
    }
    if (e.kind == ElementKind::shape) {
        if (auto* sc = std::get_if<ShapeContent>(&e.content)) {
            for (double v : {sc->x1, sc->y1, sc->x2, sc->y2})
                if (!std::isfinite(v))
                    r.add("non_finite", path + "/content", "shape geometry must be finite");
        }
    }
}

// Each element has at most one reference, so walking from any node either
// terminates at the canvas / an absolute element or revisits a node.
void check_cycles(Reader& r, const Blueprint& bp)
{
    std::map<std::string, const Element*> by_id;
    for (const auto& e : bp.elements)
        by_id.emplace(e.id, &e);
    std::set<std::string> reported;
    for (const auto& start : bp.elements) {
        std::vector<std::string> path;
        std::set<std::string> seen;
        const Element* cur = &start;
        while (cur) {
            if (seen.count(cur->id)) {
                auto it = std::find(path.begin(), path.end(), cur->id);
                std::vector<std::string> cycle(it, path.end());
                if (!reported.count(cycle.front()) && std::find(cycle.begin(), cycle.end(), start.id) != cycle.end()) {
                    std::string joined;
                    for (const auto& id : cycle) {
                        reported.insert(id);
                        joined += (joined.empty() ? "" : " -> ") + id;
                    }
                    r.add("cyclic_reference", "/elements", "reference cycle: " + joined + " -> " + cycle.front());
                }
                break;
            }
            seen.insert(cur->id);
            path.push_back(cur->id);
            auto* rel = cur->relative();
            if (!rel || rel->reference == canvas_ref)
                break;
            auto it = by_id.find(rel->reference);
            cur = it == by_id.end() ? nullptr : it->second;
        }
    }
}

void check_references(Reader& r, const Blueprint& bp, const ValidationOptions& options)
{
    std::map<std::string, int> counts;
    for (const auto& e : bp.elements)
        ++counts[e.id];
    for (std::size_t i = 0; i < bp.elements.size(); ++i) {
        const auto& e = bp.elements[i];
        std::string path = fmt::format("/elements/{}", i);
        if (e.id.empty())
            r.add("invalid_value", path + "/id", "element id must be non-empty");
        else if (counts[e.id] > 1 && bp.find(e.id) != &e)
            r.add("duplicate_id", path + "/id", "duplicate id \"" + e.id + "\"");
        if (e.id == canvas_ref)
            r.add("invalid_value", path + "/id", "\"canvas\" is reserved");
        if (!e.id.empty() && e.id == bp.background_ref)
            r.add("invalid_value", path + "/id", "element id collides with background_ref");
        if (auto* rel = e.relative()) {
            if (rel->reference == e.id)
                r.add("self_reference", path + "/position/reference", "element references itself");
            else if (rel->reference != canvas_ref && !counts.count(rel->reference))
                r.add("dangling_reference", path + "/position/reference",
                      "dangling reference \"" + rel->reference + "\"");
        }
        if (options.known_assets && e.kind == ElementKind::logo) {
            if (auto* ac = std::get_if<AssetContent>(&e.content); ac && !options.known_assets->count(ac->asset))
                r.add("unknown_asset", path + "/content/asset", "unknown asset \"" + ac->asset + "\"");
        }
    }
    check_cycles(r, bp);
}

} // namespace

ParseResult parse_blueprint(const json& doc, const ValidationOptions& options)
{
    Reader r;
    ParseResult result;
    if (!doc.is_object()) {
        r.add("wrong_type", "", "blueprint must be a JSON object");
        result.violations = std::move(r.violations);
        return result;
    }

    Blueprint bp;
    if (const json* v = r.field(doc, "blueprint_version", "", false)) {
        if (!v->is_number_integer() || v->get<long long>() != blueprint_version)
            r.add("invalid_value", "/blueprint_version", fmt::format("unsupported blueprint_version (expected {})", blueprint_version));
    }
    if (const json* canvas = r.field(doc, "canvas", "", true)) {
        if (!canvas->is_object()) {
            r.add("wrong_type", "/canvas", "canvas must be an object");
        } else {
            auto w = r.number(*canvas, "width", "/canvas", true);
            auto h = r.number(*canvas, "height", "/canvas", true);
            for (auto [v, name] : {std::pair{w, "width"}, std::pair{h, "height"}}) {
                if (v && (*v < 1 || std::floor(*v) != *v || *v > 1e6))
                    r.add("invalid_value", std::string("/canvas/") + name, "canvas dimensions must be integers >= 1");
            }
            if (w && h) {
                bp.canvas.width = static_cast<int>(*w);
                bp.canvas.height = static_cast<int>(*h);
            }
        }
    }
    if (auto v = r.string(doc, "background_ref", "", false))
        bp.background_ref = *v;
    if (auto v = r.string(doc, "layout_pattern", "", false))
        bp.layout_pattern = *v;
    if (auto v = r.string(doc, "rationale", "", false))
        bp.rationale = *v;
    bp.extras = collect_extras(doc, blueprint_keys);

    bool elements_ok = true;
    if (const json* elements = r.field(doc, "elements", "", true)) {
        if (!elements->is_array()) {
            r.add("wrong_type", "/elements", "elements must be an array");
            elements_ok = false;
        } else {
            for (std::size_t i = 0; i < elements->size(); ++i) {
                const json& ej = (*elements)[i];
                std::string path = fmt::format("/elements/{}", i);
                if (!ej.is_object()) {
                    r.add("wrong_type", path, "element must be an object");
                    elements_ok = false;
                    continue;
                }
                Element e;
                auto id = r.string(ej, "id", path, true);
                auto kind = r.enumeration<ElementKind>(ej, "kind", path, true, parse_element_kind, "unknown_kind");
                std::optional<TextRole> role;
                if (auto c = ej.find("content"); c != ej.end() && c->is_object()) {
                    if (auto rj = c->find("role"); rj != c->end() && rj->is_string())
                        role = parse_text_role(rj->get<std::string>());
                }
                std::optional<Content> content;
                if (kind)
                    content = read_content(r, r.field(ej, "content", path, true), *kind, path + "/content");
                e.style = read_style(r, r.field(ej, "style", path, false), path + "/style", role);
                auto pos = read_position(r, r.field(ej, "position", path, true), path + "/position");
                auto size = read_size(r, r.field(ej, "size", path, true), path + "/size");
                if (!id || !kind || !content || !pos || !size) {
                    elements_ok = false;
                    continue;
                }
                e.id = *id;
                e.kind = *kind;
                e.content = std::move(*content);
                e.position = std::move(*pos);
                e.size = std::move(*size);
                e.extras = collect_extras(ej, element_keys);
                check_kind_consistency(r, e, path);
                bp.elements.push_back(std::move(e));
            }
        }
    }

    if (elements_ok)
        check_references(r, bp, options);

    if (r.violations.empty())
        result.blueprint = std::move(bp);
    else
        result.violations = std::move(r.violations);
    return result;
}

ParseResult parse_blueprint(std::string_view text, const ValidationOptions& options)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::exception& ex) {
        ParseResult result;
        result.violations.push_back({"parse_error", "", std::string("document is not valid JSON: ") + ex.what()});
        return result;
    }
    return parse_blueprint(doc, options);
}

Blueprint validate_blueprint(std::string_view text, const ValidationOptions& options)
{
    auto result = parse_blueprint(text, options);
    if (!result.ok())
        throw SchemaViolation(std::move(result.violations));
    return std::move(*result.blueprint);
}

std::vector<Violation> check_blueprint(const Blueprint& bp, const ValidationOptions& options)
{
    // Round-tripping through the document form reuses every parser check.
    auto result = parse_blueprint(json::parse(to_json(bp).dump()), options);
    return result.violations;
}

namespace {

ordered_json num(double v)
{
    if (std::floor(v) == v && std::fabs(v) < 9.0e15)
        return static_cast<long long>(v);
    return v;
}

ordered_json style_json(const Style& s)
{
    ordered_json j;
    j["font_family"] = s.font_family;
    j["font_size"] = num(s.font_size);
    j["font_weight"] = to_string(s.font_weight);
    j["fill"] = s.fill.to_hex();
    if (s.stroke)
        j["stroke"] = ordered_json{{"color", s.stroke->color.to_hex()}, {"width", num(s.stroke->width)}};
    j["corner_radius"] = num(s.corner_radius);
    j["opacity"] = num(s.opacity);
    j["text_align"] = to_string(s.text_align);
    j["letter_spacing"] = num(s.letter_spacing);
    j["padding"] = num(s.padding);
    if (s.label_fill)
        j["label_fill"] = s.label_fill->to_hex();
    return j;
}

ordered_json content_json(const Content& c)
{
    return std::visit(
        [](const auto& v) -> ordered_json {
            using T = std::decay_t<decltype(v)>;
            ordered_json j;
            if constexpr (std::is_same_v<T, TextContent>) {
                j["text"] = v.text;
                if (v.role)
                    j["role"] = to_string(*v.role);
            } else if constexpr (std::is_same_v<T, AssetContent>) {
                j["asset"] = v.asset;
            } else {
                j["variant"] = to_string(v.variant);
                j["x1"] = num(v.x1);
                j["y1"] = num(v.y1);
                j["x2"] = num(v.x2);
                j["y2"] = num(v.y2);
            }
            return j;
        },
        c);
}

ordered_json position_json(const PositionSpec& p)
{
    if (auto* a = std::get_if<AbsolutePosition>(&p))
        return ordered_json{{"mode", "absolute"}, {"x", num(a->x)}, {"y", num(a->y)}};
    const auto& r = std::get<RelativePosition>(p);
    ordered_json j;
    j["mode"] = "relative";
    j["reference"] = r.reference;
    j["ref_anchor"] = to_string(r.ref_anchor);
    j["self_anchor"] = to_string(r.self_anchor);
    j["offset"] = ordered_json{{"dx", num(r.offset.dx)}, {"dy", num(r.offset.dy)}};
    return j;
}

ordered_json size_json(const SizeSpec& s)
{
    if (auto* e = std::get_if<ExplicitSize>(&s))
        return ordered_json{{"mode", "explicit"}, {"width", num(e->width)}, {"height", num(e->height)}};
    const auto& i = std::get<IntrinsicSize>(s);
    ordered_json j;
    j["mode"] = "intrinsic";
    if (i.max_width)
        j["max_width"] = num(*i.max_width);
    if (i.target_width)
        j["target_width"] = num(*i.target_width);
    if (i.target_height)
        j["target_height"] = num(*i.target_height);
    return j;
}

void append_extras(ordered_json& j, const json& extras)
{
    if (!extras.is_object())
        return;
    for (auto it = extras.begin(); it != extras.end(); ++it)
        j[it.key()] = ordered_json::parse(it.value().dump());
}

} // namespace

ordered_json to_json(const Element& e)
{
    ordered_json j;
    j["id"] = e.id;
    j["kind"] = to_string(e.kind);
    j["content"] = content_json(e.content);
    j["style"] = style_json(e.style);
    j["position"] = position_json(e.position);
    j["size"] = size_json(e.size);
    append_extras(j, e.extras);
    return j;
}

ordered_json to_json(const Blueprint& bp)
{
    ordered_json j;
    j["blueprint_version"] = blueprint_version;
    j["canvas"] = ordered_json{{"width", bp.canvas.width}, {"height", bp.canvas.height}};
    j["background_ref"] = bp.background_ref;
    j["layout_pattern"] = bp.layout_pattern;
    j["rationale"] = bp.rationale;
    j["elements"] = ordered_json::array();
    for (const auto& e : bp.elements)
        j["elements"].push_back(to_json(e));
    append_extras(j, bp.extras);
    return j;
}

std::string serialize_blueprint(const Blueprint& bp)
{
    return to_json(bp).dump(2) + "\n";
}

std::string extract_json_document(std::string_view reply)
{
    auto fence = reply.find("```");
    while (fence != std::string_view::npos) {
        auto body_start = reply.find('\n', fence);
        if (body_start == std::string_view::npos)
            break;
        auto close = reply.find("```", body_start);
        if (close == std::string_view::npos)
            break;
        auto body = reply.substr(body_start + 1, close - body_start - 1);
        auto first = body.find('{');
        auto last = body.rfind('}');
        if (first != std::string_view::npos && last != std::string_view::npos && last > first)
            return std::string(body.substr(first, last - first + 1));
        fence = reply.find("```", close + 3);
    }
    auto first = reply.find('{');
    auto last = reply.rfind('}');
    if (first == std::string_view::npos || last == std::string_view::npos || last < first)
        return std::string(reply);
    return std::string(reply.substr(first, last - first + 1));
}

} // namespace adcraft
