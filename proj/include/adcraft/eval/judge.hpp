#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "adcraft/backends/chat.hpp"
#include "adcraft/image.hpp"
#include "adcraft/request.hpp"

namespace adcraft::eval {

enum class Metric { TAA, LPS, AQS, CTAE, CPYQ, BIS };

inline constexpr std::array<Metric, 6> all_metrics{Metric::TAA, Metric::LPS,  Metric::AQS,
                                                   Metric::CTAE, Metric::CPYQ, Metric::BIS};

std::string_view to_string(Metric m);
/// Case-insensitive metric abbreviation.
std::optional<Metric> parse_metric(std::string_view s);
/// Comma-separated abbreviations; throws InvalidArgument on an unknown one.
std::vector<Metric> parse_metric_list(std::string_view s);

/// Rubric text from resources/rubrics/<METRIC>.txt.
std::string rubric(Metric m);

struct MetricScore {
    Metric metric = Metric::TAA;
    int score = 0; // 1..5
    std::string rationale;
};

/// Integer after the last "SCORE:" marker when it is 1..5; anything else
/// (other integers, fractions, words) is a parse failure.
std::optional<int> parse_score(const std::string& reply);

/// One judge call with the rubric, request context and image, plus one
/// reminder call when the reply has no valid score. Throws ScoreParseFailure.
MetricScore score_metric(const Image& banner, const BannerRequest& request,
                         const std::optional<BannerObjectives>& objectives, Metric metric, backends::ChatClient& judge);

enum class Choice { A, B };
std::string_view to_string(Choice c);

/// Choice after the last "CHOICE:" marker.
std::optional<Choice> parse_choice(const std::string& reply);

struct Preference {
    /// Empty when the judge abstained (no valid choice after one reminder).
    std::optional<Choice> choice;
    /// True when B was shown first; `choice` is already mapped back.
    bool swapped = false;
    std::string rationale;
};

/// Pairwise comparison with the presentation order drawn from `rng`.
Preference pairwise_preference(const Image& a, const Image& b, const BannerRequest& request,
                               backends::ChatClient& judge, std::mt19937_64& rng);

} // namespace adcraft::eval
