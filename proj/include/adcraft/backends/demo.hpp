#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "adcraft/blueprint.hpp"
#include "adcraft/color.hpp"
#include "adcraft/request.hpp"

namespace adcraft::backends {

struct DemoCopy {
    std::string headline;
    std::string subline;
    std::string cta;
};

/// Copy derived from the objectives: headline from the purpose, subline from
/// the audience, CTA verb from keywords in the purpose.
DemoCopy demo_copy(const BannerObjectives& objectives);

struct DemoDesignParams {
    CanvasSize canvas;
    int logo_width = 0; // 0 when unknown
    int logo_height = 0;
    Color background_mean = Color::rgb(128, 128, 128);
    int variation = 0;  // index among memory-aware variations
    int iteration = 0;  // refinement round
    std::uint64_t seed = 0;
};

/// A valid blueprint whose layout adapts to the canvas aspect: a single row
/// for leaderboards, a centered stack for skyscrapers, a left stack
/// otherwise. Font sizes shrink until every element fits inside the canvas
/// under the default text metrics.
Blueprint demo_blueprint(const DemoDesignParams& params, const DemoCopy& copy);

/// Value after `label` on the first line that starts with it (trimmed).
std::string labeled_value(std::string_view text, std::string_view label);

} // namespace adcraft::backends
