#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcraft/backends/chat.hpp"
#include "adcraft/backends/cost.hpp"
#include "adcraft/eval/judge.hpp"
#include "adcraft/layout/diagnostics.hpp"
#include "adcraft/layout/text_metrics.hpp"
#include "adcraft/run_record.hpp"

namespace adcraft::eval {

struct EvalOptions {
    std::vector<Metric> metrics{all_metrics.begin(), all_metrics.end()};
    int workers = 1;
    /// Measure overflow after clamping boxes into the canvas.
    bool clamp = false;
    double clamp_margin = 0.0;
    layout::SpacingThresholds spacing;
    layout::TextMetricsTable text_metrics;
    backends::Rates rates;
};

struct BannerEvaluation {
    std::string archive;
    std::string request_id;
    CanvasSize size;
    /// Set when the banner could not be evaluated; it is then excluded from
    /// every aggregate and counted in `failed_banners`.
    std::optional<std::string> error;
    layout::OverflowReport overflow;
    std::vector<layout::SpacingViolation> spacing;
    CostBreakdown cost;
    std::vector<MetricScore> scores;
    std::vector<Metric> score_failures;
};

struct MetricSummary {
    double mean = 0.0;
    std::size_t count = 0;
};

struct MetricReport {
    std::vector<BannerEvaluation> banners;
    bool judged = false;
    std::size_t failed_banners = 0;
    layout::OverflowReport overflow;
    std::size_t spacing_violations = 0;
    CostBreakdown generation_cost;
    /// Means over the banners the judge scored; judged runs only.
    std::map<Metric, MetricSummary> metrics;
    std::optional<CostBreakdown> judge_cost;
};

/// Directories under `root` (or `root` itself) holding a run_record.json, sorted.
std::vector<std::filesystem::path> find_archives(const std::filesystem::path& root);

/// Geometry and cost from each archive's final design; judge scores when
/// `judge` is non-null. Per-banner failures are recorded and skipped.
MetricReport evaluate_batch(const std::vector<std::filesystem::path>& archives, backends::ChatClient* judge,
                            const EvalOptions& options = {});

nlohmann::ordered_json to_json(const MetricReport& report);
/// One row per banner and metric; unjudged reports have one row per banner.
std::string to_csv(const MetricReport& report);

} // namespace adcraft::eval
