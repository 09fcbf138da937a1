#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcraft/run_record.hpp"

namespace adcraft::backends {

struct Rates {
    double input_per_mtok = 3.0;
    double output_per_mtok = 15.0;
    double image_per_megapixel = 0.0027;
    /// Each image's cost is rounded half-up to this increment before summing;
    /// unset bills the exact megapixel cost.
    std::optional<double> image_increment = 0.001;

    /// Throws InvalidArgument on negative rates.
    void check() const;
};

Rates rates_from_json(const nlohmann::json& j, Rates base = {});
nlohmann::json to_json(const Rates& r);

/// llm = sum(prompt) * in / 1e6 + sum(completion) * out / 1e6,
/// image = sum over images of the per-image cost, total = llm + image.
/// Values are unrounded; use round_cost for display.
CostBreakdown compute_cost(const std::vector<UsageRecord>& records, const Rates& rates = {});

double round_cost(double dollars, int decimals = 3);

} // namespace adcraft::backends
