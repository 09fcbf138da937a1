#include "adcraft/eval/judge.hpp"

#include <algorithm>
#include <regex>

#include <spdlog/spdlog.h>

#include "adcraft/errors.hpp"
#include "adcraft/resources.hpp"

namespace adcraft::eval {

using backends::ContentPart;

std::string_view to_string(Metric m)
{
    switch (m) {
    case Metric::TAA: return "TAA";
    case Metric::LPS: return "LPS";
    case Metric::AQS: return "AQS";
    case Metric::CTAE: return "CTAE";
    case Metric::CPYQ: return "CPYQ";
    case Metric::BIS: return "BIS";
    }
    return "?";
}

std::optional<Metric> parse_metric(std::string_view s)
{
    std::string up;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (Metric m : all_metrics)
        if (up == to_string(m))
            return m;
    return std::nullopt;
}

std::vector<Metric> parse_metric_list(std::string_view s)
{
    std::vector<Metric> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(',', start);
        auto part = s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        auto m = parse_metric(part);
        if (!m)
            throw InvalidArgument("unknown metric \"" + std::string(part) + "\" (TAA, LPS, AQS, CTAE, CPYQ, BIS)");
        if (std::find(out.begin(), out.end(), *m) == out.end())
            out.push_back(*m);
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    return out;
}

std::string rubric(Metric m) { return load_resource("rubrics/" + std::string(to_string(m)) + ".txt"); }

namespace {

std::string strip_marker(const std::string& reply, std::size_t pos, std::size_t len)
{
    std::string rest = reply.substr(0, pos) + reply.substr(pos + len);
    auto b = rest.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    return rest.substr(b, rest.find_last_not_of(" \t\r\n") - b + 1);
}

} // namespace

std::optional<int> parse_score(const std::string& reply)
{
    static const std::regex marker(R"(SCORE[ \t*_]*:[ \t*_]*([-+]?[0-9]+(?:[.,][0-9]+)?)(?![0-9A-Za-z/]))",
                                   std::regex::icase);
    std::optional<std::string> last;
    for (auto it = std::sregex_iterator(reply.begin(), reply.end(), marker); it != std::sregex_iterator(); ++it)
        last = (*it)[1].str();
    if (!last || last->size() != 1 || (*last)[0] < '1' || (*last)[0] > '5')
        return std::nullopt;
    return (*last)[0] - '0';
}

MetricScore score_metric(const Image& banner, const BannerRequest& request,
                         const std::optional<BannerObjectives>& objectives, Metric metric, backends::ChatClient& judge)
{
    BannerObjectives obj = objectives.value_or(BannerObjectives{"(not given)", "(not given)", "(not given)"});
    auto user = fill_template(load_resource("prompts/judge_score_user.txt"),
                              {{"request", request.requirement_text},
                               {"width", std::to_string(request.width)},
                               {"height", std::to_string(request.height)},
                               {"purpose", obj.primary_purpose},
                               {"audience", obj.target_audience},
                               {"mood", obj.mood_tone},
                               {"rubric", rubric(metric)}});
    auto req = backends::make_request("judge", load_resource("prompts/judge_system.txt"), user,
                                      {ContentPart::from_image(banner)});
    req.temperature = judge.temperature;
    auto reply = judge.chat(req).text;
    auto score = parse_score(reply);
    if (!score) {
        req.messages.push_back({"assistant", {ContentPart::from_text(reply)}});
        req.messages.push_back({"user", {ContentPart::from_text(load_resource("prompts/judge_score_repair.txt"))}});
        reply = judge.chat(req).text;
        score = parse_score(reply);
    }
    if (!score)
        throw ScoreParseFailure(std::string(to_string(metric)) + ": no score in 1..5 after one reminder");
    static const std::regex line(R"([^\n]*SCORE[ \t*_]*:[^\n]*\n?)", std::regex::icase);
    std::string rationale;
    std::smatch last;
    for (auto it = std::sregex_iterator(reply.begin(), reply.end(), line); it != std::sregex_iterator(); ++it)
        last = *it;
    rationale = last.empty() ? reply
                             : strip_marker(reply, static_cast<std::size_t>(last.position(0)),
                                            static_cast<std::size_t>(last.length(0)));
    return {metric, *score, rationale};
}

std::string_view to_string(Choice c) { return c == Choice::A ? "A" : "B"; }

std::optional<Choice> parse_choice(const std::string& reply)
{
    static const std::regex marker(R"(CHOICE[ \t*_]*:[ \t*_]*(?:BANNER[ \t]+)?([AB])\b)", std::regex::icase);
    std::optional<Choice> out;
    for (auto it = std::sregex_iterator(reply.begin(), reply.end(), marker); it != std::sregex_iterator(); ++it)
        out = std::toupper(static_cast<unsigned char>((*it)[1].str()[0])) == 'A' ? Choice::A : Choice::B;
    return out;
}

Preference pairwise_preference(const Image& a, const Image& b, const BannerRequest& request,
                               backends::ChatClient& judge, std::mt19937_64& rng)
{
    Preference p;
    p.swapped = (rng() & 1u) != 0;
    const Image& first = p.swapped ? b : a;
    const Image& second = p.swapped ? a : b;
    auto user = fill_template(load_resource("prompts/judge_pairwise_user.txt"),
                              {{"request", request.requirement_text},
                               {"width", std::to_string(request.width)},
                               {"height", std::to_string(request.height)}});
    auto req = backends::make_request("judge", load_resource("prompts/judge_system.txt"), user,
                                      {ContentPart::from_image(first), ContentPart::from_image(second)});
    req.temperature = judge.temperature;
    auto reply = judge.chat(req).text;
    auto shown = parse_choice(reply);
    if (!shown) {
        req.messages.push_back({"assistant", {ContentPart::from_text(reply)}});
        req.messages.push_back({"user", {ContentPart::from_text(load_resource("prompts/judge_pairwise_repair.txt"))}});
        reply = judge.chat(req).text;
        shown = parse_choice(reply);
    }
    p.rationale = reply;
    if (!shown) {
        spdlog::warn("pairwise judge gave no valid choice; recorded as abstention");
        return p;
    }
    p.choice = p.swapped ? (*shown == Choice::A ? Choice::B : Choice::A) : *shown;
    return p;
}

} // namespace adcraft::eval
