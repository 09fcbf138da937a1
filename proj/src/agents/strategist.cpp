#include "adcraft/agents/strategist.hpp"

#include <algorithm>
#include <cctype>

#include "adcraft/errors.hpp"
#include "prompts.hpp"

namespace adcraft::agents {

namespace {

std::string normalize_label(std::string s)
{
    std::string out;
    for (char c : s)
        if (std::isalpha(static_cast<unsigned char>(c)) || c == ' ')
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto b = out.find_first_not_of(' ');
    auto e = out.find_last_not_of(' ');
    return b == std::string::npos ? std::string() : out.substr(b, e - b + 1);
}

std::string clean_value(std::string s)
{
    auto strip = [](std::string& v) {
        auto b = v.find_first_not_of(" \t\r*_");
        auto e = v.find_last_not_of(" \t\r*_");
        v = b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    strip(s);
    return s;
}

} // namespace

std::optional<BannerObjectives> parse_objectives(const std::string& reply, std::string* problem)
{
    BannerObjectives obj;
    std::size_t pos = 0;
    while (pos < reply.size()) {
        auto end = reply.find('\n', pos);
        std::string line = reply.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? reply.size() : end + 1;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            continue;
        auto label = normalize_label(line.substr(0, colon));
        auto value = clean_value(line.substr(colon + 1));
        if (value.empty())
            continue;
        if ((label == "purpose" || label == "primary purpose") && obj.primary_purpose.empty())
            obj.primary_purpose = value;
        else if ((label == "audience" || label == "target audience") && obj.target_audience.empty())
            obj.target_audience = value;
        else if ((label == "mood" || label == "mood and tone" || label == "tone") && obj.mood_tone.empty())
            obj.mood_tone = value;
    }
    if (obj.complete())
        return obj;
    if (problem) {
        std::vector<std::string> missing;
        if (obj.primary_purpose.empty())
            missing.push_back("Purpose");
        if (obj.target_audience.empty())
            missing.push_back("Audience");
        if (obj.mood_tone.empty())
            missing.push_back("Mood");
        *problem = "missing ";
        for (std::size_t i = 0; i < missing.size(); ++i)
            *problem += (i ? ", " : "") + missing[i];
    }
    return std::nullopt;
}

BannerObjectives run_strategist(const BannerRequest& req, backends::ChatClient& chat)
{
    auto request = backends::make_request(
        "strategist", detail::prompt("strategist_system"),
        detail::prompt("strategist_user", {{"user_input", req.requirement_text},
                                           {"width", std::to_string(req.width)},
                                           {"height", std::to_string(req.height)}}));
    request.temperature = chat.temperature;
    auto first = chat.chat(request);
    std::string problem;
    if (auto obj = parse_objectives(first.text, &problem))
        return *obj;

    request.messages.push_back({"assistant", {backends::ContentPart::from_text(first.text)}});
    request.messages.push_back(
        {"user", {backends::ContentPart::from_text(detail::prompt("strategist_repair", {{"problem", problem}}))}});
    auto second = chat.chat(request);
    if (auto obj = parse_objectives(second.text, &problem))
        return *obj;
    throw ObjectiveParseFailure("strategist reply unusable after one retry: " + problem);
}

} // namespace adcraft::agents
