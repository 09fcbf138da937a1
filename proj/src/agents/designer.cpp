#include "adcraft/agents/designer.hpp"

#include <cmath>
#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "adcraft/blueprint_io.hpp"
#include "adcraft/errors.hpp"
#include "prompts.hpp"

namespace adcraft::agents {

using backends::ContentPart;

std::string_view to_string(Verdict v) { return v == Verdict::production_ready ? "production_ready" : "revise"; }

std::string iteration_dir(int t) { return "iter_" + std::to_string(t); }

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

detail::Values design_values(const DesignBrief& brief)
{
    auto v = detail::objective_values(brief.request, brief.objectives);
    v.emplace_back("logo_width", std::to_string(brief.logo.width()));
    v.emplace_back("logo_height", std::to_string(brief.logo.height()));
    return v;
}

layout::AssetSizes brief_assets(const DesignBrief& brief)
{
    return {{"logo", {brief.logo.width(), brief.logo.height()}}};
}

Blueprint request_with_repairs(backends::ChatRequest request, const DesignBrief& brief, backends::ChatClient& chat,
                               const DesignerOptions& options)
{
    std::vector<Violation> last;
    for (int round = 0; round <= std::max(0, options.max_repairs); ++round) {
        auto reply = chat.chat(request).text;
        auto result = check_designer_reply(reply, brief);
        if (result.ok())
            return *result.blueprint;
        last = result.violations;
        if (round == std::max(0, options.max_repairs))
            break;
        spdlog::info("designer reply for {} rejected ({} problems), repair round {}", brief.request.id, last.size(),
                     round + 1);
        request.messages.push_back({"assistant", {ContentPart::from_text(reply)}});
        request.messages.push_back(
            {"user", {ContentPart::from_text(detail::prompt("blueprint_repair", {{"violations", format_violations(last)}}))}});
    }
    throw BlueprintFailure(fmt::format("no valid blueprint after {} repair rounds:\n{}", options.max_repairs,
                                       format_violations(last)));
}

std::string fenced(const Blueprint& bp) { return "```json\n" + serialize_blueprint(bp) + "\n```"; }

} // namespace

Review parse_review(const std::string& reply)
{
    static const std::regex marker(R"(^[ \t*_#>-]*VERDICT[ \t*_]*:[ \t*_]*(REVISE|PRODUCTION[_ ]READY)\b.*$)",
                                   std::regex::icase | std::regex::multiline);
    Review r;
    std::smatch last;
    bool found = false;
    for (auto it = std::sregex_iterator(reply.begin(), reply.end(), marker); it != std::sregex_iterator(); ++it) {
        last = *it;
        found = true;
    }
    if (!found) {
        r.feedback = trim(reply);
        r.verdict = Verdict::revise;
        r.verdict_parsed = false;
        return r;
    }
    std::string word = last[1].str();
    r.verdict = std::toupper(static_cast<unsigned char>(word[0])) == 'P' ? Verdict::production_ready : Verdict::revise;
    std::string rest = reply.substr(0, static_cast<std::size_t>(last.position(0))) +
                       reply.substr(static_cast<std::size_t>(last.position(0) + last.length(0)));
    r.feedback = trim(rest);
    return r;
}

void DesignMemory::append(MemoryIteration it)
{
    if (it.t != static_cast<int>(iterations_.size()))
        throw InvalidArgument(fmt::format("memory expects iteration {}, got {}", iterations_.size(), it.t));
    if (it.t == 0 && it.modifications)
        throw InvalidArgument("iteration 0 has no modification list");
    if (it.t > 0 && !it.modifications)
        throw InvalidArgument("iterations after 0 need a modification list");
    iterations_.push_back(std::move(it));
}

void DesignMemory::set_feedback(const std::string& feedback)
{
    if (iterations_.empty())
        throw InvalidArgument("no iteration to attach feedback to");
    if (iterations_.back().feedback)
        throw InvalidArgument("iteration already has feedback");
    iterations_.back().feedback = feedback;
}

std::size_t DesignMemory::feedback_count() const
{
    return static_cast<std::size_t>(
        std::count_if(iterations_.begin(), iterations_.end(), [](const auto& i) { return i.feedback.has_value(); }));
}

std::size_t DesignMemory::modification_count() const
{
    return static_cast<std::size_t>(std::count_if(iterations_.begin(), iterations_.end(),
                                                  [](const auto& i) { return i.modifications.has_value(); }));
}

std::string DesignMemory::history_text() const
{
    if (iterations_.empty())
        return "(none, this is the first iteration)";
    std::string out;
    for (const auto& it : iterations_) {
        out += fmt::format("Iteration {}:\n", it.t);
        if (it.modifications)
            out += "  Modifications: " + *it.modifications + "\n";
        out += "  Feedback: " + (it.feedback ? *it.feedback : std::string("(pending)")) + "\n";
    }
    return out;
}

ParseResult check_designer_reply(const std::string& reply, const DesignBrief& brief)
{
    ValidationOptions opts;
    opts.known_assets = std::set<std::string>{"logo"};
    auto result = parse_blueprint(extract_json_document(reply), opts);
    if (!result.ok())
        return result;
    Blueprint bp = std::move(*result.blueprint);
    result.blueprint.reset();
    bp.background_ref = "background";
    if (bp.canvas != brief.request.size()) {
        result.violations.push_back(
            {"canvas_mismatch", "/canvas",
             fmt::format("canvas must be {}, got {}", format_size(brief.request.size()), format_size(bp.canvas))});
        return result;
    }
    try {
        layout::resolve_layout(bp, brief.metrics, brief_assets(brief));
    } catch (const Error& e) {
        result.violations.push_back({"unresolvable", "/elements", e.what()});
        return result;
    }
    result.blueprint = std::move(bp);
    return result;
}

Blueprint design_foreground(const DesignBrief& brief, backends::ChatClient& chat, const std::vector<Blueprint>& prior,
                            const DesignerOptions& options)
{
    auto v = design_values(brief);
    v.emplace_back("layout_demonstrations", load_resource("prompts/layout_demonstrations.json"));
    v.emplace_back("variation_count", std::to_string(prior.size()));
    std::string designs;
    for (std::size_t i = 0; i < prior.size(); ++i)
        designs += fmt::format("Design {}:\n{}\n", i + 1, fenced(prior[i]));
    v.emplace_back("prior_variations", prior.empty() ? std::string() : detail::prompt("variation_note", {{"designs", designs}}));
    auto system = detail::prompt("foreground_designer_system", {{"schema", load_resource("prompts/blueprint_schema.txt")}});
    auto request = backends::make_request("foreground_designer", system, detail::prompt("foreground_designer_user", v),
                                          {ContentPart::from_image(brief.background), ContentPart::from_image(brief.logo)});
    request.temperature = chat.temperature;
    return request_with_repairs(std::move(request), brief, chat, options);
}

Blueprint refine_foreground(const DesignBrief& brief, const DesignMemory& memory, const Blueprint& current,
                            const Image& render, const std::string& feedback, int t, backends::ChatClient& chat,
                            const DesignerOptions& options)
{
    auto v = design_values(brief);
    v.emplace_back("iteration", std::to_string(t));
    v.emplace_back("memory", memory.history_text());
    v.emplace_back("feedback", feedback);
    v.emplace_back("blueprint", fenced(current));
    auto system = detail::prompt("foreground_refine_system",
                                 {{"schema", load_resource("prompts/blueprint_schema.txt")},
                                  {"width", std::to_string(brief.request.width)},
                                  {"height", std::to_string(brief.request.height)}});
    auto request = backends::make_request("foreground_designer", system, detail::prompt("foreground_refine_user", v),
                                          {ContentPart::from_image(render), ContentPart::from_image(brief.background)});
    request.temperature = chat.temperature;
    return request_with_repairs(std::move(request), brief, chat, options);
}

Review review_design(const Image& render, const DesignBrief& brief, const Blueprint& bp, const std::string& diagnostics,
                     const DesignMemory& memory, int t, backends::ChatClient& chat)
{
    detail::Values v{{"width", std::to_string(brief.request.width)},
                     {"height", std::to_string(brief.request.height)},
                     {"iteration", std::to_string(t)},
                     {"blueprint", serialize_blueprint(bp)},
                     {"diagnostics", diagnostics.empty() ? std::string("no geometry problems found") : diagnostics},
                     {"memory", memory.history_text()}};
    auto request = backends::make_request("reviewer", detail::prompt("reviewer_system", v),
                                          detail::prompt("reviewer_user", v),
                                          {ContentPart::from_image(render), ContentPart::from_image(brief.background)});
    request.temperature = chat.temperature;
    auto review = parse_review(chat.chat(request).text);
    if (!review.verdict_parsed)
        spdlog::warn("reviewer reply for {} at iteration {} has no verdict line; treating as revise", brief.request.id, t);
    return review;
}

std::vector<std::string> structural_diff(const Blueprint& prev, const Blueprint& next,
                                         const layout::ResolvedLayout* prev_layout,
                                         const layout::ResolvedLayout* next_layout)
{
    // Layout coordinates carry float noise; two decimals are enough for a reader.
    auto format_number = [](double v) { return render::format_number(std::round(v * 100.0) / 100.0); };
    std::vector<std::string> out;
    std::map<std::string, const Element*> before, after;
    for (const auto& e : prev.elements)
        before[e.id] = &e;
    for (const auto& e : next.elements)
        after[e.id] = &e;

    for (const auto& e : prev.elements)
        if (!after.count(e.id))
            out.push_back(fmt::format("- removed {}: {}", e.id, to_string(e.kind)));
    for (const auto& e : next.elements)
        if (!before.count(e.id))
            out.push_back(fmt::format("- added {}: {}", e.id, to_string(e.kind)));

    const bool boxes = prev_layout && next_layout;
    for (const auto& n : next.elements) {
        auto it = before.find(n.id);
        if (it == before.end())
            continue;
        const Element& p = *it->second;
        if (boxes) {
            const auto* pb = prev_layout->find(n.id);
            const auto* nb = next_layout->find(n.id);
            if (pb && nb) {
                if (pb->x != nb->x || pb->y != nb->y)
                    out.push_back(fmt::format("- moved {}: ({}, {}) -> ({}, {})", n.id, format_number(pb->x),
                                              format_number(pb->y), format_number(nb->x), format_number(nb->y)));
                if (pb->width != nb->width || pb->height != nb->height)
                    out.push_back(fmt::format("- resized {}: {}x{} -> {}x{}", n.id, format_number(pb->width),
                                              format_number(pb->height), format_number(nb->width),
                                              format_number(nb->height)));
            }
        } else {
            if (p.position != n.position) {
                const auto* pa = std::get_if<AbsolutePosition>(&p.position);
                const auto* na = std::get_if<AbsolutePosition>(&n.position);
                if (pa && na)
                    out.push_back(fmt::format("- moved {}: ({}, {}) -> ({}, {})", n.id, format_number(pa->x),
                                              format_number(pa->y), format_number(na->x), format_number(na->y)));
                else
                    out.push_back(fmt::format("- moved {}: position changed", n.id));
            }
            if (p.size != n.size)
                out.push_back(fmt::format("- resized {}: size changed", n.id));
        }
        std::vector<std::string> colors;
        if (p.style.fill != n.style.fill)
            colors.push_back("fill " + p.style.fill.to_hex() + " -> " + n.style.fill.to_hex());
        if (p.style.stroke != n.style.stroke)
            colors.push_back("stroke");
        if (p.style.label_fill != n.style.label_fill)
            colors.push_back("label " + (p.style.label_fill ? p.style.label_fill->to_hex() : std::string("auto")) +
                             " -> " + (n.style.label_fill ? n.style.label_fill->to_hex() : std::string("auto")));
        if (!colors.empty()) {
            std::string d;
            for (std::size_t i = 0; i < colors.size(); ++i)
                d += (i ? ", " : "") + colors[i];
            out.push_back(fmt::format("- recolored {}: {}", n.id, d));
        }
        const auto* pt = p.text();
        const auto* nt = n.text();
        if (pt && nt && *pt != *nt)
            out.push_back(fmt::format("- text {}: \"{}\" -> \"{}\"", n.id, *pt, *nt));
        std::vector<std::string> fields;
        const auto& a = p.style;
        const auto& b = n.style;
        if (a.font_family != b.font_family)
            fields.push_back("font family");
        if (a.font_size != b.font_size)
            fields.push_back("font size " + format_number(a.font_size) + " -> " + format_number(b.font_size));
        if (a.font_weight != b.font_weight)
            fields.push_back("font weight");
        if (a.corner_radius != b.corner_radius)
            fields.push_back("corner radius");
        if (a.opacity != b.opacity)
            fields.push_back("opacity");
        if (a.text_align != b.text_align)
            fields.push_back("alignment");
        if (a.letter_spacing != b.letter_spacing)
            fields.push_back("letter spacing");
        if (a.padding != b.padding)
            fields.push_back("padding");
        if (p.kind != n.kind)
            fields.push_back("kind");
        if (p.content.index() != n.content.index() || (!pt && p.content != n.content))
            fields.push_back("content");
        if (!fields.empty()) {
            std::string d;
            for (std::size_t i = 0; i < fields.size(); ++i)
                d += (i ? ", " : "") + fields[i];
            out.push_back(fmt::format("- restyled {}: {}", n.id, d));
        }
    }

    std::vector<std::string> order_prev, order_next;
    for (const auto& e : prev.elements)
        if (after.count(e.id))
            order_prev.push_back(e.id);
    for (const auto& e : next.elements)
        if (before.count(e.id))
            order_next.push_back(e.id);
    if (order_prev != order_next) {
        std::string d;
        for (std::size_t i = 0; i < order_next.size(); ++i)
            d += (i ? ", " : "") + order_next[i];
        out.push_back("- reordered elements: " + d);
    }
    return out;
}

Modifications compare_and_conclude(const Blueprint& prev, const Blueprint& next, int t, backends::ChatClient& chat,
                                   const layout::ResolvedLayout* prev_layout,
                                   const layout::ResolvedLayout* next_layout)
{
    Modifications m;
    m.diff = structural_diff(prev, next, prev_layout, next_layout);
    std::string raw;
    for (const auto& line : m.diff)
        raw += line + "\n";
    if (m.diff.empty()) {
        m.summary = "no changes";
        return m;
    }
    try {
        auto request = backends::make_request(
            "compare_conclude", detail::prompt("compare_conclude_system"),
            detail::prompt("compare_conclude_user",
                           {{"iteration", std::to_string(t)}, {"previous", std::to_string(t - 1)}, {"diff", raw}}));
        request.temperature = chat.temperature;
        m.summary = trim(chat.chat(request).text);
        m.summarized = !m.summary.empty();
    } catch (const Error& e) {
        spdlog::warn("compare & conclude summary unavailable ({}); keeping the structural diff", e.what());
    }
    if (!m.summarized)
        m.summary = trim(raw);
    return m;
}

Lowered lower_design(const Blueprint& bp, const render::AssetStore& assets, const layout::TextMetricsTable& metrics,
                     render::RasterizerInterface& rasterizer, const LoweringOptions& options)
{
    Lowered out;
    out.layout = layout::resolve_layout(bp, metrics, assets.sizes());
    if (options.clamp)
        out.layout = layout::clamp_into_canvas(out.layout, options.clamp_margin);
    out.overflow = layout::detect_overflow(out.layout);
    out.svg = render::emit_svg(out.layout, bp, assets, options.svg);
    out.render = rasterizer.rasterize(out.svg);
    return out;
}

std::string diagnostics_text(const Blueprint& bp, const layout::ResolvedLayout& lay, const Image* background)
{
    std::string out;
    auto overflow = layout::detect_overflow(lay);
    if (overflow.overflow_elements > 0) {
        out += fmt::format("- {} of {} elements extend past the canvas:", overflow.overflow_elements,
                           overflow.total_elements);
        for (const auto& id : overflow.overflow_ids)
            out += " " + id;
        out += "\n";
    }
    auto spacing = layout::spacing_diagnostics(lay);
    for (std::size_t i = 0; i < spacing.size() && i < 8; ++i)
        out += "- " + spacing[i].message + "\n";
    for (const auto& c : layout::contrast_diagnostics(bp, lay, background))
        if (!c.passes)
            out += fmt::format("- {} has contrast {:.2f}:1, below {}:1\n", c.id, c.ratio, layout::min_text_contrast);
    return out;
}

namespace {

struct Current {
    Blueprint blueprint;
    Lowered lowered;
    std::string feedback;
};

RefineResult run_rounds(DesignMemory memory, Current cur, int first_t, int max_iters, const DesignBrief& brief,
                        RefineDeps& deps, RefineResult result)
{
    for (int t = first_t; t < first_t + max_iters; ++t) {
        Blueprint next = refine_foreground(brief, memory, cur.blueprint, cur.lowered.render, cur.feedback, t, deps.chat,
                                           deps.designer);
        Lowered lowered = lower_design(next, deps.assets, brief.metrics, deps.rasterizer, deps.lowering);
        Modifications mods =
            compare_and_conclude(cur.blueprint, next, t, deps.chat, &cur.lowered.layout, &lowered.layout);
        memory.append({t, next, iteration_dir(t) + "/render.png", std::nullopt, mods.summary, mods.diff});
        Review review = review_design(lowered.render, brief, next, diagnostics_text(next, lowered.layout, &brief.background),
                                      memory, t, deps.chat);
        memory.set_feedback(review.feedback);
        IterationResult it{t, next, lowered, review, mods};
        if (deps.on_iteration)
            deps.on_iteration(it, memory);
        result.history.push_back(it);
        cur = Current{std::move(next), std::move(lowered), review.feedback};
        if (review.verdict == Verdict::production_ready) {
            result.production_ready = true;
            break;
        }
    }
    result.memory = std::move(memory);
    return result;
}

} // namespace

RefineResult refine_loop(const Blueprint& initial, int max_iters, const DesignBrief& brief, RefineDeps& deps)
{
    if (max_iters < 0)
        throw InvalidArgument("max_iters must be >= 0");
    DesignMemory memory;
    memory.objectives = brief.objectives;
    Lowered lowered = lower_design(initial, deps.assets, brief.metrics, deps.rasterizer, deps.lowering);
    memory.append({0, initial, iteration_dir(0) + "/render.png", std::nullopt, std::nullopt, {}});
    Review review = review_design(lowered.render, brief, initial,
                                  diagnostics_text(initial, lowered.layout, &brief.background), memory, 0, deps.chat);
    memory.set_feedback(review.feedback);
    IterationResult it{0, initial, lowered, review, std::nullopt};
    if (deps.on_iteration)
        deps.on_iteration(it, memory);
    RefineResult result;
    result.history.push_back(it);
    if (review.verdict == Verdict::production_ready) {
        result.production_ready = true;
        result.memory = std::move(memory);
        return result;
    }
    return run_rounds(std::move(memory), Current{initial, std::move(lowered), review.feedback}, 1, max_iters, brief,
                      deps, std::move(result));
}

RefineResult continue_refinement(DesignMemory memory, int max_iters, const DesignBrief& brief, RefineDeps& deps)
{
    if (memory.iterations().empty())
        throw InvalidArgument("nothing to continue: memory is empty");
    const auto& last = memory.iterations().back();
    if (!last.feedback)
        throw InvalidArgument("latest iteration has not been reviewed");
    Lowered lowered = lower_design(last.blueprint, deps.assets, brief.metrics, deps.rasterizer, deps.lowering);
    Current cur{last.blueprint, std::move(lowered), *last.feedback};
    const int first = last.t + 1;
    return run_rounds(std::move(memory), std::move(cur), first, max_iters, brief, deps, RefineResult{});
}

VariationResult generate_variations(const DesignBrief& brief, int n, backends::ChatClient& chat,
                                    const DesignerOptions& options)
{
    if (n < 1)
        throw InvalidArgument("variation count must be >= 1");
    VariationResult out;
    for (int i = 0; i < n; ++i) {
        try {
            out.designs.push_back(design_foreground(brief, chat, out.designs, options));
        } catch (const BlueprintFailure& e) {
            out.error = fmt::format("variation {}: {}", i + 1, e.what());
            break;
        }
    }
    return out;
}

} // namespace adcraft::agents
