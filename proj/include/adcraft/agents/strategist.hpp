#pragma once

#include <optional>
#include <string>

#include "adcraft/backends/chat.hpp"
#include "adcraft/request.hpp"

namespace adcraft::agents {

/// Reads "Purpose:", "Audience:" and "Mood:" lines (longer labels such as
/// "Primary Purpose:" and list or bold markers are accepted). Empty optional
/// when a field is missing; `problem` then names it.
std::optional<BannerObjectives> parse_objectives(const std::string& reply, std::string* problem = nullptr);

/// One chat call, plus one repair call when the reply does not parse.
/// Throws ObjectiveParseFailure.
BannerObjectives run_strategist(const BannerRequest& req, backends::ChatClient& chat);

} // namespace adcraft::agents
