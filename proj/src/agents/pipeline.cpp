#include "adcraft/agents/pipeline.hpp"

#include <chrono>
#include <ctime>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "adcraft/agents/background.hpp"
#include "adcraft/agents/strategist.hpp"
#include "adcraft/backends/cost.hpp"
#include "adcraft/blueprint_io.hpp"
#include "adcraft/errors.hpp"
#include "adcraft/render/figma.hpp"

namespace adcraft::agents {

namespace fs = std::filesystem;
using nlohmann::json;

Providers make_providers(const backends::AppConfig& config)
{
    Providers p;
    p.chat = backends::make_chat_provider(config.chat, config.seed);
    p.t2i = backends::make_t2i_provider(config.t2i);
    p.rasterizer = render::make_rasterizer(config.rasterizer_command);
    return p;
}

std::string archive_timestamp()
{
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    localtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d_%H%M%S", &tm);
    return buf;
}

RunRecord load_run_record(const fs::path& archive)
{
    auto path = archive / "run_record.json";
    if (!fs::exists(path))
        throw InvalidArgument("no run_record.json in " + archive.string());
    try {
        return run_record_from_json(json::parse(read_text_file(path)));
    } catch (const json::exception& e) {
        throw InvalidArgument(path.string() + " is not valid JSON: " + e.what());
    }
}

namespace {

constexpr const char* background_file = "background.png";
constexpr const char* logo_file = "logo_trimmed.png";

/// Per-run state shared by generation and refinement of an archive.
class RunContext {
public:
    RunContext(const backends::AppConfig& config, const Providers& providers, fs::path archive)
        : config_(config), ledger_(std::make_shared<backends::UsageLedger>()),
          chat(providers.chat, ledger_, config.chat.retry), images(providers.t2i, ledger_, config.t2i.retry),
          rasterizer(*providers.rasterizer), archive(std::move(archive))
    {
        chat.temperature = config.chat.temperature;
    }

    void save(RunRecord& record, std::vector<UsageRecord> earlier = {}) const
    {
        auto now = ledger_->records();
        earlier.insert(earlier.end(), now.begin(), now.end());
        record.usage = std::move(earlier);
        record.cost = backends::compute_cost(record.usage, config_.rates);
        write_text_file(archive / "run_record.json", to_json(record).dump(2) + "\n");
    }

    /// Assets with hrefs relative to a directory `depth` levels below the archive.
    render::AssetStore assets(const Image& background, const Image& logo, int depth) const
    {
        std::string up;
        for (int i = 0; i < depth; ++i)
            up += "../";
        render::AssetStore store;
        store.add("background", background, up + background_file);
        store.add("logo", logo, up + logo_file);
        return store;
    }

    LoweringOptions lowering() const
    {
        LoweringOptions o;
        o.clamp = config_.pipeline.clamp;
        o.clamp_margin = config_.pipeline.clamp_margin;
        // The in-memory raster always reads embedded assets; the archived SVG
        // follows the configured embedding.
        o.svg.embed_assets = true;
        return o;
    }

    DesignerOptions designer() const { return {config_.pipeline.max_blueprint_repairs}; }

    /// Writes blueprint.json, banner.svg and render.png into `dir`.
    void write_design(const fs::path& rel_dir, const Blueprint& bp, const Lowered& lowered,
                      const render::AssetStore& assets) const
    {
        fs::create_directories(archive / rel_dir);
        write_text_file(archive / rel_dir / "blueprint.json", serialize_blueprint(bp) + "\n");
        std::string svg = lowered.svg;
        if (!config_.pipeline.embed_assets) {
            render::SvgOptions o;
            o.embed_assets = false;
            svg = render::emit_svg(lowered.layout, bp, assets, o);
        }
        write_text_file(archive / rel_dir / "banner.svg", svg);
        save_png(lowered.render, archive / rel_dir / "render.png");
    }

    IterationRecord archive_iteration(const IterationResult& it, bool reviewed, const render::AssetStore& assets) const
    {
        const std::string dir = iteration_dir(it.t);
        write_design(dir, it.blueprint, it.lowered, assets);
        IterationRecord rec;
        rec.t = it.t;
        rec.blueprint_path = dir + "/blueprint.json";
        rec.svg_path = dir + "/banner.svg";
        rec.render_path = dir + "/render.png";
        if (reviewed) {
            rec.verdict = std::string(to_string(it.review.verdict));
            rec.feedback = it.review.feedback;
            rec.verdict_parsed = it.review.verdict_parsed;
            write_text_file(archive / dir / "review.txt",
                            it.review.feedback + "\n\nVERDICT: " + rec.verdict + "\n");
        }
        if (it.modifications) {
            rec.structural_diff = it.modifications->diff;
            rec.modifications = it.modifications->summary;
            std::string text = it.modifications->summary + "\n";
            if (it.modifications->summarized) {
                text += "\nStructural diff:\n";
                for (const auto& line : it.modifications->diff)
                    text += line + "\n";
            }
            write_text_file(archive / dir / "modifications.txt", text);
        }
        return rec;
    }

    RefineDeps deps(const render::AssetStore& assets)
    {
        return RefineDeps{chat, rasterizer, assets, lowering(), designer(), {}};
    }

    const backends::AppConfig& config_;
    std::shared_ptr<backends::UsageLedger> ledger_;
    backends::ChatClient chat;
    backends::ImageClient images;
    render::RasterizerInterface& rasterizer;
    fs::path archive;
};

void write_figma(const RunContext& ctx, RunRecord& record, const Blueprint& bp, const layout::ResolvedLayout& lay,
                 const render::AssetStore& assets)
{
    auto plugin = render::emit_figma_plugin(lay, bp, assets, render::default_figma_template());
    fs::create_directories(ctx.archive / "figma");
    write_text_file(ctx.archive / "figma/code.js", plugin.code);
    write_text_file(ctx.archive / "figma/manifest.json", plugin.manifest.dump(2) + "\n");
    record.figma_code_path = "figma/code.js";
    record.figma_manifest_path = "figma/manifest.json";
}

std::string final_verdict(const RunRecord& record)
{
    for (auto it = record.iterations.rbegin(); it != record.iterations.rend(); ++it)
        if (!it->verdict.empty())
            return it->verdict;
    return "";
}

} // namespace

RunOutcome run_pipeline(const BannerRequest& req, const backends::AppConfig& config, const Providers& providers,
                        const RunOptions& options)
{
    const std::string name = options.archive_name ? *options.archive_name : archive_timestamp() + "_" + req.id;
    RunContext ctx(config, providers, options.out_root / name);
    fs::create_directories(ctx.archive);

    RunRecord record;
    record.request_id = req.id;
    record.size = req.size();
    record.requirement_text = req.requirement_text;
    std::string stage = "strategist";
    spdlog::info("run {} -> {}", req.id, ctx.archive.string());

    try {
        if (req.width < 1 || req.height < 1)
            throw InvalidArgument(fmt::format("banner size {}x{} is not positive", req.width, req.height));

        BannerObjectives objectives = options.objectives ? *options.objectives : run_strategist(req, ctx.chat);
        record.objectives = objectives;
        record.stages.push_back(stage);
        ctx.save(record);

        stage = "logo";
        if (req.logo.empty() || !fs::is_regular_file(req.logo))
            throw MissingAsset("logo file not found: " + req.logo);
        Image logo = trim_logo(load_png(req.logo), config.pipeline.logo_alpha_threshold).image;
        save_png(logo, ctx.archive / logo_file);
        record.logo_path = logo_file;
        record.stages.push_back(stage);

        stage = "background";
        BackgroundOptions bg_opts;
        bg_opts.max_attempts = config.pipeline.max_background_attempts;
        bg_opts.negative_prompt = config.t2i.negative_prompt;
        bg_opts.seed = config.seed;
        auto bg = prepare_background(req, objectives, logo, ctx.chat, ctx.images, bg_opts);
        save_png(bg.image, ctx.archive / background_file);
        bg.provenance.path = background_file;
        record.background = bg.provenance;
        record.stages.push_back(stage);
        ctx.save(record);

        stage = "foreground";
        DesignBrief brief{req, objectives, bg.image, logo, config.pipeline.metrics};
        Blueprint initial = design_foreground(brief, ctx.chat, {}, ctx.designer());
        record.stages.push_back(stage);

        stage = "render";
        const auto iter_assets = ctx.assets(bg.image, logo, 1);
        const int rounds = config.pipeline.refine_iters;
        Blueprint final_bp = initial;
        Lowered final_lowered;
        if (rounds == 0) {
            IterationResult it{0, initial, lower_design(initial, iter_assets, brief.metrics, ctx.rasterizer, ctx.lowering()),
                               {}, std::nullopt};
            record.iterations.push_back(ctx.archive_iteration(it, false, iter_assets));
            final_lowered = it.lowered;
            record.stages.push_back(stage);
        } else {
            auto deps = ctx.deps(iter_assets);
            deps.on_iteration = [&](const IterationResult& it, const DesignMemory&) {
                record.iterations.push_back(ctx.archive_iteration(it, true, iter_assets));
                if (it.t == 0) {
                    record.stages.push_back("render");
                    stage = "refine";
                }
                ctx.save(record);
            };
            auto result = refine_loop(initial, rounds, brief, deps);
            final_bp = result.history.back().blueprint;
            final_lowered = result.history.back().lowered;
            record.stages.push_back("refine");
        }
        record.final_verdict = final_verdict(record);
        ctx.save(record);

        if (config.pipeline.variations > 1) {
            stage = "variations";
            const auto var_assets = ctx.assets(bg.image, logo, 2);
            record.variations.push_back({1, record.iterations.front().blueprint_path,
                                         record.iterations.front().svg_path, record.iterations.front().render_path});
            std::vector<Blueprint> priors{initial};
            for (int i = 2; i <= config.pipeline.variations; ++i) {
                Blueprint v = design_foreground(brief, ctx.chat, priors, ctx.designer());
                priors.push_back(v);
                auto lowered = lower_design(v, var_assets, brief.metrics, ctx.rasterizer, ctx.lowering());
                const std::string dir = "variations/v" + std::to_string(i);
                ctx.write_design(dir, v, lowered, var_assets);
                record.variations.push_back(
                    {i, dir + "/blueprint.json", dir + "/banner.svg", dir + "/render.png"});
                ctx.save(record);
            }
            record.stages.push_back(stage);
        }

        if (config.pipeline.figma) {
            stage = "figma";
            write_figma(ctx, record, final_bp, final_lowered.layout, iter_assets);
            record.stages.push_back(stage);
        }

        stage = "archive";
        record.status = "success";
        record.stages.push_back(stage);
        ctx.save(record);
    } catch (const std::exception& e) {
        record.status = "failed";
        record.failed_stage = stage;
        record.error = e.what();
        spdlog::error("run {} failed at stage {}: {}", req.id, stage, e.what());
        try {
            ctx.save(record);
        } catch (const std::exception& e2) {
            spdlog::error("cannot write run record for {}: {}", req.id, e2.what());
        }
    }
    return {record, ctx.archive};
}

std::vector<RunOutcome> run_multi_size(const BannerRequest& req, const std::vector<CanvasSize>& sizes,
                                       const backends::AppConfig& config, const Providers& providers,
                                       const RunOptions& options)
{
    if (sizes.empty())
        throw InvalidArgument("no sizes given");
    RunOptions opts = options;
    if (!opts.objectives) {
        auto ledger = std::make_shared<backends::UsageLedger>();
        backends::ChatClient chat(providers.chat, ledger, config.chat.retry);
        chat.temperature = config.chat.temperature;
        BannerRequest first = req;
        first.width = sizes.front().width;
        first.height = sizes.front().height;
        opts.objectives = run_strategist(first, chat);
    }
    const std::string stamp = archive_timestamp();
    std::vector<RunOutcome> out;
    for (const auto& size : sizes) {
        BannerRequest r = req;
        r.width = size.width;
        r.height = size.height;
        r.id = req.id + "_" + format_size(size);
        RunOptions o = opts;
        if (!options.archive_name)
            o.archive_name = stamp + "_" + r.id;
        else
            o.archive_name = *options.archive_name + "_" + format_size(size);
        out.push_back(run_pipeline(r, config, providers, o));
    }
    return out;
}

RunOutcome refine_archive(const fs::path& archive, int iters, const backends::AppConfig& config,
                          const Providers& providers)
{
    if (iters < 1)
        throw InvalidArgument("refinement needs at least one round");
    RunRecord record = load_run_record(archive);
    if (!record.objectives || record.iterations.empty() || record.logo_path.empty() || !record.background)
        throw InvalidArgument("archive " + archive.string() + " has no completed design to refine");

    RunContext ctx(config, providers, archive);
    const std::vector<UsageRecord> earlier = record.usage;
    std::string stage = "refine";
    record.status = "running";
    record.failed_stage.reset();
    record.error.reset();
    try {
        BannerRequest req;
        req.id = record.request_id;
        req.requirement_text = record.requirement_text;
        req.width = record.size.width;
        req.height = record.size.height;
        req.logo = (archive / record.logo_path).string();
        Image logo = load_png(archive / record.logo_path);
        Image background = load_png(archive / record.background->path);
        DesignBrief brief{req, *record.objectives, background, logo, config.pipeline.metrics};
        const auto iter_assets = ctx.assets(background, logo, 1);

        DesignMemory memory;
        memory.objectives = brief.objectives;
        memory.background_description = record.background->description;
        for (const auto& it : record.iterations) {
            auto parsed = parse_blueprint(read_text_file(archive / it.blueprint_path));
            if (!parsed.ok())
                throw InvalidArgument(it.blueprint_path + " is not a valid blueprint:\n" +
                                      format_violations(parsed.violations));
            MemoryIteration m{it.t, *parsed.blueprint, it.render_path, std::nullopt, it.modifications,
                              it.structural_diff};
            memory.append(std::move(m));
            if (!it.verdict.empty())
                memory.set_feedback(it.feedback);
        }

        // A design generated without refinement has not been reviewed yet.
        if (record.iterations.back().verdict.empty()) {
            const auto& last = memory.iterations().back();
            auto lowered = lower_design(last.blueprint, iter_assets, brief.metrics, ctx.rasterizer, ctx.lowering());
            auto review = review_design(lowered.render, brief, last.blueprint,
                                        diagnostics_text(last.blueprint, lowered.layout, &background), memory, last.t,
                                        ctx.chat);
            memory.set_feedback(review.feedback);
            IterationResult it{last.t, last.blueprint, lowered, review, std::nullopt};
            auto rec = ctx.archive_iteration(it, true, iter_assets);
            rec.structural_diff = record.iterations.back().structural_diff;
            rec.modifications = record.iterations.back().modifications;
            record.iterations.back() = rec;
            ctx.save(record, earlier);
        }

        auto deps = ctx.deps(iter_assets);
        deps.on_iteration = [&](const IterationResult& it, const DesignMemory&) {
            record.iterations.push_back(ctx.archive_iteration(it, true, iter_assets));
            ctx.save(record, earlier);
        };
        auto result = continue_refinement(std::move(memory), iters, brief, deps);
        record.stages.push_back("refine");
        record.final_verdict = final_verdict(record);

        if (config.pipeline.figma || record.figma_code_path) {
            stage = "figma";
            const auto& last = result.memory.iterations().back();
            auto lowered = lower_design(last.blueprint, iter_assets, brief.metrics, ctx.rasterizer, ctx.lowering());
            write_figma(ctx, record, last.blueprint, lowered.layout, iter_assets);
        }
        record.status = "success";
        ctx.save(record, earlier);
    } catch (const std::exception& e) {
        record.status = "failed";
        record.failed_stage = stage;
        record.error = e.what();
        spdlog::error("refinement of {} failed at stage {}: {}", archive.string(), stage, e.what());
        try {
            ctx.save(record, earlier);
        } catch (const std::exception& e2) {
            spdlog::error("cannot write run record: {}", e2.what());
        }
    }
    return {record, archive};
}

} // namespace adcraft::agents
