#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adcraft/backends/chat.hpp"
#include "adcraft/blueprint.hpp"
#include "adcraft/blueprint_io.hpp"
#include "adcraft/image.hpp"
#include "adcraft/layout/diagnostics.hpp"
#include "adcraft/layout/resolve.hpp"
#include "adcraft/render/assets.hpp"
#include "adcraft/render/raster.hpp"
#include "adcraft/render/svg.hpp"
#include "adcraft/request.hpp"

namespace adcraft::agents {

/// Everything the foreground designer sees: fixed for the whole run.
struct DesignBrief {
    BannerRequest request;
    BannerObjectives objectives;
    Image background;
    Image logo;
    layout::TextMetricsTable metrics;
};

enum class Verdict { revise, production_ready };
std::string_view to_string(Verdict v);

struct Review {
    std::string feedback;
    Verdict verdict = Verdict::revise;
    /// False when the marker line was missing and revise was assumed.
    bool verdict_parsed = true;
};

/// Takes the last "VERDICT: REVISE|PRODUCTION_READY" line; feedback is the
/// reply without it. No marker: revise with the raw reply.
Review parse_review(const std::string& reply);

struct MemoryIteration {
    int t = 0;
    Blueprint blueprint;
    std::string render_path;
    std::optional<std::string> feedback;
    std::optional<std::string> modifications; // t >= 1 only
    std::vector<std::string> structural_diff;
};

/// Shared, append-only history of one design's refinement.
class DesignMemory {
public:
    BannerObjectives objectives;
    std::optional<std::string> background_description;

    /// Throws InvalidArgument when `it.t` is not the next index or a
    /// modification list is given for t = 0.
    void append(MemoryIteration it);
    /// Adds the review of the latest iteration (once).
    void set_feedback(const std::string& feedback);

    const std::vector<MemoryIteration>& iterations() const { return iterations_; }
    std::size_t feedback_count() const;
    std::size_t modification_count() const;

    /// Plain-text history for prompts, oldest first.
    std::string history_text() const;

private:
    std::vector<MemoryIteration> iterations_;
};

struct DesignerOptions {
    int max_repairs = 2;
};

/// Parses and checks one designer reply: schema, canvas size, logo asset,
/// and that the layout resolves. Returns the blueprint or the violations.
ParseResult check_designer_reply(const std::string& reply, const DesignBrief& brief);

/// First design. `prior` holds earlier variations to stay distinct from.
/// Throws BlueprintFailure after `max_repairs` failed repair rounds.
Blueprint design_foreground(const DesignBrief& brief, backends::ChatClient& chat,
                            const std::vector<Blueprint>& prior = {}, const DesignerOptions& options = {});

/// Refinement at iteration t from the latest feedback and the memory.
Blueprint refine_foreground(const DesignBrief& brief, const DesignMemory& memory, const Blueprint& current,
                            const Image& render, const std::string& feedback, int t, backends::ChatClient& chat,
                            const DesignerOptions& options = {});

/// Reviewer call with the render, the background, the blueprint, geometry
/// diagnostics and the memory history.
Review review_design(const Image& render, const DesignBrief& brief, const Blueprint& bp,
                     const std::string& diagnostics, const DesignMemory& memory, int t, backends::ChatClient& chat);

/// Deterministic element-level differences, one line each:
/// "- <added|removed|moved|resized|recolored|text|restyled|reordered> <id>: <detail>".
/// Geometry compares resolved boxes when both layouts are given, otherwise
/// the position and size specs.
std::vector<std::string> structural_diff(const Blueprint& prev, const Blueprint& next,
                                         const layout::ResolvedLayout* prev_layout = nullptr,
                                         const layout::ResolvedLayout* next_layout = nullptr);

struct Modifications {
    std::vector<std::string> diff;
    std::string summary;
    /// True only when the summary came from the chat model; false for "no
    /// changes" and for the raw-diff fallback after a failed chat call.
    bool summarized = false;
};

/// Structural diff first, then a chat summary of it. An empty diff gives
/// "no changes" without a chat call.
Modifications compare_and_conclude(const Blueprint& prev, const Blueprint& next, int t, backends::ChatClient& chat,
                                   const layout::ResolvedLayout* prev_layout = nullptr,
                                   const layout::ResolvedLayout* next_layout = nullptr);

/// "iter_<t>": archive subdirectory of refinement iteration t.
std::string iteration_dir(int t);

/// One lowered design: layout (clamped when asked), SVG and its raster.
struct Lowered {
    layout::ResolvedLayout layout;
    std::string svg;
    Image render;
    layout::OverflowReport overflow;
};

struct LoweringOptions {
    bool clamp = false;
    double clamp_margin = 0.0;
    render::SvgOptions svg;
};

Lowered lower_design(const Blueprint& bp, const render::AssetStore& assets, const layout::TextMetricsTable& metrics,
                     render::RasterizerInterface& rasterizer, const LoweringOptions& options = {});

/// Overflow, spacing and contrast findings as short text lines.
std::string diagnostics_text(const Blueprint& bp, const layout::ResolvedLayout& layout, const Image* background);

struct IterationResult {
    int t = 0;
    Blueprint blueprint;
    Lowered lowered;
    Review review;
    std::optional<Modifications> modifications;
};

struct RefineDeps {
    backends::ChatClient& chat;
    render::RasterizerInterface& rasterizer;
    const render::AssetStore& assets;
    LoweringOptions lowering;
    DesignerOptions designer;
    /// Called after each completed iteration (archiving); exceptions propagate.
    std::function<void(const IterationResult&, const DesignMemory&)> on_iteration;
};

struct RefineResult {
    std::vector<IterationResult> history;
    DesignMemory memory;
    bool production_ready = false;
};

/// t = 0 lowers and reviews the initial design; each later round refines,
/// compares, lowers and reviews. Stops at production_ready or after
/// `max_iters` rounds past t = 0. `start_t` and `memory` continue an earlier
/// run (the initial blueprint is then the latest one, already reviewed).
RefineResult refine_loop(const Blueprint& initial, int max_iters, const DesignBrief& brief, RefineDeps& deps);
RefineResult continue_refinement(DesignMemory memory, int max_iters, const DesignBrief& brief, RefineDeps& deps);

struct VariationResult {
    std::vector<Blueprint> designs;
    /// Set when variation designs.size() + 1 failed; earlier ones are kept.
    std::optional<std::string> error;
};

/// Sequential memory-aware variations: the prompt for V_i embeds V_1..V_{i-1}.
VariationResult generate_variations(const DesignBrief& brief, int n, backends::ChatClient& chat,
                                    const DesignerOptions& options = {});

} // namespace adcraft::agents
