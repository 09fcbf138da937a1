#pragma once

#include <string>

#include "adcraft/blueprint.hpp"
#include "adcraft/layout/resolve.hpp"
#include "adcraft/render/assets.hpp"

namespace adcraft::render {

struct SvgOptions {
    /// Embed assets as base64 data URIs; otherwise reference them by filename.
    bool embed_assets = true;
    std::string font_fallback = "Helvetica, Arial, sans-serif";
    /// Text boxes are top-aligned; the first baseline sits this many font
    /// sizes below the box top.
    double baseline_ratio = 0.8;
    /// Line pitch for wrapped text, in font sizes.
    double line_height = 1.2;
};

/// Shortest decimal that parses back to exactly `v`.
std::string format_number(double v);

std::string xml_escape(std::string_view text);

/// Standalone SVG 1.1 document. The background image is painted first, then
/// one node per element in z-order. Every element node carries
/// id=<element id>, data-kind, and data-x/y/width/height equal to its box.
/// Byte-deterministic. Throws MissingAsset.
std::string emit_svg(const layout::ResolvedLayout& layout, const Blueprint& bp, const AssetStore& assets,
                     const SvgOptions& options = {});

} // namespace adcraft::render
