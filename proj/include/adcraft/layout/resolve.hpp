#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adcraft/blueprint.hpp"
#include "adcraft/layout/text_metrics.hpp"

namespace adcraft::layout {

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

struct ResolvedBox {
    std::string id;
    ElementKind kind = ElementKind::text;
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;
    /// The reference this box was anchored to, if any (not "canvas").
    std::optional<std::string> reference;
    Offset offset;
    /// Wrapped text lines for text and CTA labels.
    std::vector<std::string> lines;

    double right() const { return x + width; }
    double bottom() const { return y + height; }
    Point anchor(NinePoint p) const;

    bool operator==(const ResolvedBox&) const = default;
};

/// Boxes are stored in blueprint element order (z-order); `resolution_order`
/// is the topological order the resolver used.
struct ResolvedLayout {
    CanvasSize canvas;
    std::vector<ResolvedBox> boxes;
    std::vector<std::string> resolution_order;

    const ResolvedBox* find(std::string_view id) const;
    bool operator==(const ResolvedLayout&) const = default;
};

struct AssetDimensions {
    int width = 0;
    int height = 0;
};
using AssetSizes = std::map<std::string, AssetDimensions, std::less<>>;

/// Resolves every element to an absolute box. Pure: identical inputs give
/// bit-identical outputs, and permuting the element list changes only the
/// box order, never a box.
///
/// Throws CyclicReference, MissingReference, and MissingAssetSize when an
/// intrinsically sized logo has no entry in `assets`.
ResolvedLayout resolve_layout(const Blueprint& bp, const TextMetricsTable& metrics, const AssetSizes& assets = {});

/// Logo width from a target height (or height from a target width) keeping the
/// asset aspect ratio, rounded half-up to whole pixels.
double scale_to_height(AssetDimensions asset, double target_height);
double scale_to_width(AssetDimensions asset, double target_width);

} // namespace adcraft::layout
