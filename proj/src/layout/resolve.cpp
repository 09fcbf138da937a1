#include "adcraft/layout/resolve.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>

#include "adcraft/errors.hpp"

namespace adcraft::layout {

Point ResolvedBox::anchor(NinePoint p) const
{
    auto f = anchor_fraction(p);
    return {x + f.fx * width, y + f.fy * height};
}

const ResolvedBox* ResolvedLayout::find(std::string_view id) const
{
    for (const auto& b : boxes)
        if (b.id == id)
            return &b;
    return nullptr;
}

double scale_to_height(AssetDimensions asset, double target_height)
{
    double aspect = static_cast<double>(asset.width) / asset.height;
    return std::floor(target_height * aspect + 0.5);
}

double scale_to_width(AssetDimensions asset, double target_width)
{
    double aspect = static_cast<double>(asset.width) / asset.height;
    return std::floor(target_width / aspect + 0.5);
}

namespace {

struct Sized {
    double width;
    double height;
    std::vector<std::string> lines;
};

Sized element_size(const Element& e, const TextMetricsTable& metrics, const AssetSizes& assets)
{
    const auto* explicit_size = std::get_if<ExplicitSize>(&e.size);
    const auto* intrinsic = std::get_if<IntrinsicSize>(&e.size);

    switch (e.kind) {
    case ElementKind::text: {
        const std::string& text = *e.text();
        if (explicit_size) {
            auto m = measure_text(text, e.style, metrics, explicit_size->width);
            return {explicit_size->width, explicit_size->height, std::move(m.lines)};
        }
        auto m = measure_text(text, e.style, metrics, intrinsic->max_width);
        return {m.width, m.height, std::move(m.lines)};
    }
    case ElementKind::cta_button: {
        const std::string& text = *e.text();
        const double pad = e.style.padding;
        if (explicit_size) {
            auto inner = std::max(explicit_size->width - 2 * pad, 1.0);
            auto m = measure_text(text, e.style, metrics, inner);
            return {explicit_size->width, explicit_size->height, std::move(m.lines)};
        }
        std::optional<double> inner;
        if (intrinsic->max_width)
            inner = std::max(*intrinsic->max_width - 2 * pad, 1.0);
        auto m = measure_text(text, e.style, metrics, inner);
        return {m.width + 2 * pad, m.height + 2 * pad, std::move(m.lines)};
    }
    case ElementKind::logo: {
        if (explicit_size)
            return {explicit_size->width, explicit_size->height, {}};
        const auto& asset = std::get<AssetContent>(e.content).asset;
        auto it = assets.find(asset);
        if (it == assets.end() || it->second.width <= 0 || it->second.height <= 0)
            throw MissingAssetSize("no dimensions known for asset \"" + asset + "\" (element " + e.id + ")");
        if (intrinsic->target_height)
            return {scale_to_height(it->second, *intrinsic->target_height), *intrinsic->target_height, {}};
        if (intrinsic->target_width)
            return {*intrinsic->target_width, scale_to_width(it->second, *intrinsic->target_width), {}};
        return {static_cast<double>(it->second.width), static_cast<double>(it->second.height), {}};
    }
    case ElementKind::shape:
        if (explicit_size)
            return {explicit_size->width, explicit_size->height, {}};
        throw InvalidArgument("shape element " + e.id + " requires an explicit size");
    }
    throw InvalidArgument("unknown element kind");
}

std::vector<std::string> extract_cycle(const Blueprint& bp, const std::unordered_map<std::string, std::size_t>& index,
                                       std::size_t start)
{
    std::vector<std::size_t> path;
    std::set<std::size_t> seen;
    std::size_t cur = start;
    while (!seen.count(cur)) {
        seen.insert(cur);
        path.push_back(cur);
        cur = index.at(bp.elements[cur].relative()->reference);
    }
    auto first = std::find(path.begin(), path.end(), cur);
    std::vector<std::size_t> cycle(first, path.end());
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
    std::vector<std::string> ids;
    for (auto i : cycle)
        ids.push_back(bp.elements[i].id);
    return ids;
}

} // namespace

ResolvedLayout resolve_layout(const Blueprint& bp, const TextMetricsTable& metrics, const AssetSizes& assets)
{
    const std::size_t n = bp.elements.size();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i)
        index.emplace(bp.elements[i].id, i);

    // dependents[i] = elements anchored to element i.
    std::vector<std::vector<std::size_t>> dependents(n);
    std::vector<int> pending(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto* rel = bp.elements[i].relative();
        if (!rel || rel->reference == canvas_ref)
            continue;
        if (rel->reference == bp.elements[i].id)
            throw CyclicReference({bp.elements[i].id});
        auto it = index.find(rel->reference);
        if (it == index.end())
            throw MissingReference("element \"" + bp.elements[i].id + "\" references unknown id \"" + rel->reference + "\"");
        dependents[it->second].push_back(i);
        pending[i] = 1;
    }

    // Kahn's algorithm; ties broken by element list position.
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (pending[i] == 0)
            ready.push(i);

    ResolvedLayout out;
    out.canvas = bp.canvas;
    std::vector<std::optional<ResolvedBox>> boxes(n);
    const ResolvedBox canvas_box{std::string(canvas_ref), ElementKind::shape, 0.0, 0.0,
                                 static_cast<double>(bp.canvas.width), static_cast<double>(bp.canvas.height)};

    while (!ready.empty()) {
        std::size_t i = ready.top();
        ready.pop();
        const Element& e = bp.elements[i];
        Sized sz = element_size(e, metrics, assets);

        ResolvedBox box;
        box.id = e.id;
        box.kind = e.kind;
        box.width = sz.width;
        box.height = sz.height;
        box.lines = std::move(sz.lines);
        if (const auto* abs = std::get_if<AbsolutePosition>(&e.position)) {
            box.x = abs->x;
            box.y = abs->y;
        } else {
            const auto& rel = std::get<RelativePosition>(e.position);
            const ResolvedBox& ref = rel.reference == canvas_ref ? canvas_box : *boxes[index.at(rel.reference)];
            Point target = ref.anchor(rel.ref_anchor);
            auto self = anchor_fraction(rel.self_anchor);
            box.x = target.x + rel.offset.dx - self.fx * box.width;
            box.y = target.y + rel.offset.dy - self.fy * box.height;
            if (rel.reference != canvas_ref)
                box.reference = rel.reference;
            box.offset = rel.offset;
        }
        boxes[i] = std::move(box);
        out.resolution_order.push_back(e.id);
        for (auto d : dependents[i])
            if (--pending[d] == 0)
                ready.push(d);
    }

    if (out.resolution_order.size() != n) {
        for (std::size_t i = 0; i < n; ++i)
            if (!boxes[i])
                throw CyclicReference(extract_cycle(bp, index, i));
    }

    out.boxes.reserve(n);
    for (auto& b : boxes)
        out.boxes.push_back(std::move(*b));
    return out;
}

} // namespace adcraft::layout
