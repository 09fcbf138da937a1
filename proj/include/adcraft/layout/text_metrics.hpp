#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adcraft/blueprint.hpp"

namespace adcraft::layout {

/// Deterministic per-character advance model. Real fonts will differ; the
/// boxes computed from this table are estimates that make overflow
/// statistics reproducible.
struct TextMetricsTable {
    double advance_normal = 0.55;
    double advance_bold = 0.60;
    double advance_black = 0.65;
    double line_height = 1.2;

    double advance_ratio(FontWeight w) const;
    /// Throws InvalidArgument unless advances are in (0, 2] and line height in [1, 2].
    void check() const;
};

struct TextMeasure {
    double width = 0.0;
    double height = 0.0;
    int line_count = 1;
    std::vector<std::string> lines;
};

/// Number of Unicode code points in a UTF-8 string (invalid bytes count as one).
std::size_t utf8_length(std::string_view s);

/// Greedy word wrap at `max_width`; words longer than a line are broken
/// between code points. Explicit '\n' always breaks.
TextMeasure measure_text(std::string_view content, const Style& style, const TextMetricsTable& metrics,
                         std::optional<double> max_width = std::nullopt);

} // namespace adcraft::layout
