#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcraft/blueprint.hpp"
#include "adcraft/color.hpp"
#include "adcraft/image.hpp"
#include "adcraft/layout/resolve.hpp"

namespace adcraft::layout {

struct OverflowReport {
    std::size_t total_elements = 0;
    std::size_t overflow_elements = 0;
    std::vector<std::string> overflow_ids;
    double overflow_rate = 0.0; // fraction, not percent

    static OverflowReport from_counts(std::size_t total, std::size_t overflowing);
    /// Pools counts (and ids) of two reports; the rate is recomputed.
    OverflowReport& merge(const OverflowReport& other);
    double percent() const { return overflow_rate * 100.0; }
};

nlohmann::json to_json(const OverflowReport& r);

bool box_inside_canvas(const ResolvedBox& box, CanvasSize canvas);

/// An element overflows iff its box is not fully inside [0, w] x [0, h].
OverflowReport detect_overflow(const ResolvedLayout& layout);

/// Translates every overflowing box by the minimal vector that places it inside
/// the canvas inset by `margin` (the inset shrinks per axis when the box would
/// not fit it). Boxes already inside are untouched; idempotent.
/// Throws UnfixableOverflow when a box is larger than the canvas.
ResolvedLayout clamp_into_canvas(const ResolvedLayout& layout, double margin = 0.0);

struct SpacingThresholds {
    double min_gap = 20.0;
    double edge_margin = 40.0;
    /// Axes shorter than this scale both thresholds down proportionally.
    double scale_below = 200.0;
};

struct SpacingViolation {
    enum class Type { pair, edge };
    Type type = Type::pair;
    std::string first;
    std::string second; // empty for edge violations
    double gap_x = 0.0; // pair: axis gaps; edge: smallest horizontal / vertical margin
    double gap_y = 0.0;
    std::string message;
};

nlohmann::json to_json(const SpacingViolation& v);

std::vector<SpacingViolation> spacing_diagnostics(const ResolvedLayout& layout, const SpacingThresholds& thresholds = {});

/// WCAG 2.1 contrast ratio (L1 + 0.05) / (L2 + 0.05); a translucent `fg` is
/// composited onto `bg` first.
double contrast_ratio(const Color& fg, const Color& bg);
double relative_luminance(const Color& c);

inline constexpr double min_text_contrast = 4.5;

struct ContrastFinding {
    std::string id;
    Color foreground;
    Color background;
    double ratio = 1.0;
    bool passes = true;
    bool assumed_background = false; // no background image: white assumed
};

nlohmann::json to_json(const ContrastFinding& f);

/// Contrast of every text-bearing element against what is painted beneath
/// it: the topmost earlier filled element containing its center, otherwise
/// the mean background color under its box.
std::vector<ContrastFinding> contrast_diagnostics(const Blueprint& bp, const ResolvedLayout& layout,
                                                  const Image* background = nullptr);

/// Label color for a CTA: the configured one, else whichever of black/white
/// contrasts more with the button fill.
Color label_color(const Style& style);

} // namespace adcraft::layout
