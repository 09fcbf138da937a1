#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcraft/blueprint.hpp"
#include "adcraft/request.hpp"

namespace adcraft {

/// One backend invocation. Chat calls carry token counts, image calls carry
/// image count and megapixels; every call carries all five counters.
struct UsageRecord {
    std::string agent_role;
    std::string provider;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    int images = 0;
    double megapixels = 0.0;

    bool operator==(const UsageRecord&) const = default;
};

struct CostBreakdown {
    double llm_cost = 0.0;
    double image_cost = 0.0;
    double total = 0.0;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    int images = 0;

    bool operator==(const CostBreakdown&) const = default;
};

struct BackgroundProvenance {
    bool found_existing = false;
    std::string path;                       // archive-relative
    std::optional<std::string> source_path; // the found file, when found_existing
    std::optional<std::string> description;
    int attempts = 0;
    bool still_has_text = false;
    std::vector<std::string> prompt_history;
    std::optional<CanvasSize> generated_size;

    bool operator==(const BackgroundProvenance&) const = default;
};

struct IterationRecord {
    int t = 0;
    std::string blueprint_path;
    std::string svg_path;
    std::string render_path;
    std::string verdict; // "revise" | "production_ready" | "" (not reviewed)
    std::string feedback;
    bool verdict_parsed = true;
    std::vector<std::string> structural_diff; // empty at t = 0
    std::optional<std::string> modifications;

    bool operator==(const IterationRecord&) const = default;
};

struct VariationRecord {
    int index = 0;
    std::string blueprint_path;
    std::string svg_path;
    std::string render_path;

    bool operator==(const VariationRecord&) const = default;
};

/// Full provenance of one pipeline run. Paths are relative to the archive
/// directory so records from identical runs compare equal.
struct RunRecord {
    std::string request_id;
    CanvasSize size;
    std::string requirement_text;
    std::optional<BannerObjectives> objectives;
    std::optional<BackgroundProvenance> background;
    std::string logo_path;
    std::vector<IterationRecord> iterations;
    std::vector<VariationRecord> variations;
    std::optional<std::string> figma_code_path;
    std::optional<std::string> figma_manifest_path;
    std::vector<std::string> stages; // completed stages, in execution order
    std::vector<UsageRecord> usage;
    CostBreakdown cost;
    std::string status = "running"; // running | success | failed
    std::optional<std::string> failed_stage;
    std::optional<std::string> error;
    std::string final_verdict;

    bool operator==(const RunRecord&) const = default;
};

nlohmann::json to_json(const UsageRecord& r);
UsageRecord usage_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CostBreakdown& c);

nlohmann::json to_json(const RunRecord& r);
/// Throws InvalidArgument on missing required fields.
RunRecord run_record_from_json(const nlohmann::json& j);

} // namespace adcraft
