#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcraft/agents/pipeline.hpp"
#include "adcraft/blueprint.hpp"
#include "adcraft/request.hpp"
#include "adcraft/run_record.hpp"

namespace adcraft::bench {

/// One line of requests.jsonl.
struct BenchmarkRequest {
    std::string id;
    std::string logo; // resolved against the file's directory
    std::string intention;
    std::string audience;
    std::string purpose;
    std::optional<std::string> t2i_prompt;
    std::optional<CanvasSize> size;

    bool operator==(const BenchmarkRequest&) const = default;
};

/// Parses JSON Lines; blank lines and lines starting with '#' are skipped.
/// Throws FormatError naming the 1-based line. With `check_logos`, logo files
/// must exist.
std::vector<BenchmarkRequest> parse_requests(std::string_view text, const std::filesystem::path& base_dir,
                                             bool check_logos = true);
std::vector<BenchmarkRequest> load_requests(const std::filesystem::path& path, bool check_logos = true);

/// The 13-entry IAB display size table.
const std::vector<CanvasSize>& default_sizes();

/// sizes.json: an array of "WxH" strings, [w, h] pairs or {width, height}
/// objects, optionally wrapped as {"sizes": [...]}. Throws FormatError.
std::vector<CanvasSize> load_sizes(const std::filesystem::path& path);

/// Every request at every size; ids gain a "_WxH" suffix.
std::vector<BenchmarkRequest> expand_sizes(const std::vector<BenchmarkRequest>& requests,
                                           const std::vector<CanvasSize>& sizes);

/// Pipeline input. Throws InvalidArgument when the request has no size.
BannerRequest to_banner_request(const BenchmarkRequest& r);

struct ManifestEntry {
    std::string id;
    std::string archive; // relative to the batch output directory
    std::string status;  // success | failed
    std::optional<std::string> failed_stage;
    std::optional<std::string> error;
    CostBreakdown cost;

    bool operator==(const ManifestEntry&) const = default;
};

struct BatchManifest {
    std::vector<ManifestEntry> entries; // in request order
    CostBreakdown total;
    std::size_t executed = 0;
    std::size_t skipped = 0;
    bool interrupted = false;

    std::size_t failures() const;
    bool ok() const { return !interrupted && failures() == 0; }
    const ManifestEntry* find(std::string_view id) const;
};

nlohmann::json to_json(const BatchManifest& m);
BatchManifest manifest_from_json(const nlohmann::json& j);

inline constexpr std::string_view manifest_name = "batch_manifest.json";

struct BatchOptions {
    std::filesystem::path out_dir = "runs";
    int workers = 4;
    /// Checked between requests; when set, no new request starts.
    const std::atomic<bool>* cancel = nullptr;
};

/// Runs every request on a worker pool, writing <out_dir>/batch_manifest.json
/// after each completion. Requests whose manifest entry succeeded and whose
/// archive still holds a successful run record are skipped.
BatchManifest run_batch(const std::vector<BenchmarkRequest>& requests, const backends::AppConfig& config,
                        const agents::Providers& providers, const BatchOptions& options = {});

} // namespace adcraft::bench
