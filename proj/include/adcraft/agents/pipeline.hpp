#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adcraft/agents/designer.hpp"
#include "adcraft/backends/chat.hpp"
#include "adcraft/backends/config.hpp"
#include "adcraft/backends/t2i.hpp"
#include "adcraft/render/raster.hpp"
#include "adcraft/request.hpp"
#include "adcraft/run_record.hpp"

namespace adcraft::agents {

/// Providers shared by every run of a process. Each run wraps them in its own
/// clients and usage ledger.
struct Providers {
    std::shared_ptr<backends::ChatProvider> chat;
    std::shared_ptr<backends::T2IProvider> t2i;
    std::shared_ptr<render::RasterizerInterface> rasterizer;
};

Providers make_providers(const backends::AppConfig& config);

struct RunOptions {
    /// Parent of the archive directory.
    std::filesystem::path out_root = "runs";
    /// Archive directory name; default "<YYYYMMDD_HHMMSS>_<request id>".
    std::optional<std::string> archive_name;
    /// Reuse objectives (multi-size runs) instead of calling the strategist.
    std::optional<BannerObjectives> objectives;
};

struct RunOutcome {
    RunRecord record;
    std::filesystem::path archive;
    bool ok() const { return record.status == "success"; }
};

/// Strategist, background, foreground, lowering, optional refinement,
/// variations and Figma export; everything is archived as it completes.
/// Stage failures are recorded in the RunRecord rather than thrown.
RunOutcome run_pipeline(const BannerRequest& req, const backends::AppConfig& config, const Providers& providers,
                        const RunOptions& options = {});

/// One strategist call, then a run per size with ids suffixed "_WxH".
std::vector<RunOutcome> run_multi_size(const BannerRequest& req, const std::vector<CanvasSize>& sizes,
                                       const backends::AppConfig& config, const Providers& providers,
                                       const RunOptions& options = {});

/// Continues the refinement of an archived run for up to `iters` more rounds,
/// updating the archive and its RunRecord in place.
RunOutcome refine_archive(const std::filesystem::path& archive, int iters, const backends::AppConfig& config,
                          const Providers& providers);

std::string archive_timestamp();

/// Reads <archive>/run_record.json. Throws InvalidArgument.
RunRecord load_run_record(const std::filesystem::path& archive);

} // namespace adcraft::agents
