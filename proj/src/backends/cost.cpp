#include "adcraft/backends/cost.hpp"

#include <cmath>

#include "adcraft/errors.hpp"

namespace adcraft::backends {

void Rates::check() const
{
    if (input_per_mtok < 0 || output_per_mtok < 0 || image_per_megapixel < 0)
        throw InvalidArgument("rates must be >= 0");
    if (image_increment && !(*image_increment > 0))
        throw InvalidArgument("image cost increment must be > 0");
}

Rates rates_from_json(const nlohmann::json& j, Rates base)
{
    if (!j.is_object())
        throw ConfigError("rates must be an object");
    base.input_per_mtok = j.value("input_per_mtok", base.input_per_mtok);
    base.output_per_mtok = j.value("output_per_mtok", base.output_per_mtok);
    base.image_per_megapixel = j.value("image_per_megapixel", base.image_per_megapixel);
    if (auto it = j.find("image_increment"); it != j.end())
        base.image_increment = it->is_null() ? std::nullopt : std::optional<double>(it->get<double>());
    try {
        base.check();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return base;
}

nlohmann::json to_json(const Rates& r)
{
    return nlohmann::json{{"input_per_mtok", r.input_per_mtok},
                          {"output_per_mtok", r.output_per_mtok},
                          {"image_per_megapixel", r.image_per_megapixel},
                          {"image_increment", r.image_increment ? nlohmann::json(*r.image_increment) : nlohmann::json()}};
}

CostBreakdown compute_cost(const std::vector<UsageRecord>& records, const Rates& rates)
{
    rates.check();
    CostBreakdown c;
    for (const auto& r : records) {
        c.prompt_tokens += r.prompt_tokens;
        c.completion_tokens += r.completion_tokens;
        c.images += r.images;
        if (r.images > 0) {
            double each = r.megapixels / r.images * rates.image_per_megapixel;
            if (rates.image_increment)
                each = std::floor(each / *rates.image_increment + 0.5) * *rates.image_increment;
            c.image_cost += each * r.images;
        } else {
            c.image_cost += r.megapixels * rates.image_per_megapixel;
        }
    }
    c.llm_cost = static_cast<double>(c.prompt_tokens) * rates.input_per_mtok / 1e6 +
                 static_cast<double>(c.completion_tokens) * rates.output_per_mtok / 1e6;
    c.total = c.llm_cost + c.image_cost;
    return c;
}

double round_cost(double dollars, int decimals)
{
    double k = std::pow(10.0, decimals);
    return std::round(dollars * k) / k;
}

} // namespace adcraft::backends
