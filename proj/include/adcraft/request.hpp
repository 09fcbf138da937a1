#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adcraft/blueprint.hpp"

namespace adcraft {

/// The advertiser's brief: a logo plus free-text requirements at a target size.
struct BannerRequest {
    std::string id;
    std::string logo;              // path to a raster image (PNG)
    std::string requirement_text;
    int width = 0;
    int height = 0;
    std::optional<std::string> background_hint;
    std::optional<std::string> language;

    CanvasSize size() const { return {width, height}; }
};

/// Throws InvalidArgument when the dimensions are not positive or the logo
/// cannot be decoded.
void check_request(const BannerRequest& req);

struct BannerObjectives {
    std::string primary_purpose;
    std::string target_audience;
    std::string mood_tone;

    bool complete() const { return !primary_purpose.empty() && !target_audience.empty() && !mood_tone.empty(); }
    bool operator==(const BannerObjectives&) const = default;
};

/// Parses "300x250" (also accepts 'X' and '×').
std::optional<CanvasSize> parse_size(std::string_view text);
std::string format_size(CanvasSize size);
/// Comma-separated list of sizes; throws InvalidArgument on a bad entry.
std::vector<CanvasSize> parse_size_list(std::string_view text);

} // namespace adcraft
