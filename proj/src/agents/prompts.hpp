#pragma once

#include <string>
#include <utility>
#include <vector>

#include "adcraft/request.hpp"
#include "adcraft/resources.hpp"

namespace adcraft::agents::detail {

using Values = std::vector<std::pair<std::string, std::string>>;

/// resources/prompts/<name>.txt with placeholders filled.
inline std::string prompt(const std::string& name, const Values& values = {})
{
    return fill_template(load_resource("prompts/" + name + ".txt"), values);
}

inline Values objective_values(const BannerRequest& req, const BannerObjectives& obj)
{
    return {{"user_input", req.requirement_text},
            {"purpose", obj.primary_purpose},
            {"audience", obj.target_audience},
            {"mood", obj.mood_tone},
            {"width", std::to_string(req.width)},
            {"height", std::to_string(req.height)}};
}

} // namespace adcraft::agents::detail
