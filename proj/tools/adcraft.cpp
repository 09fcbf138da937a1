// adcraft: banner generation, rendering, benchmarking and evaluation.

#include <cmath>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "adcraft/agents/background.hpp"
#include "adcraft/agents/pipeline.hpp"
#include "adcraft/bench/bench.hpp"
#include "adcraft/blueprint_io.hpp"
#include "adcraft/errors.hpp"
#include "adcraft/eval/report.hpp"
#include "adcraft/layout/diagnostics.hpp"
#include "adcraft/render/figma.hpp"
#include "adcraft/render/svg.hpp"
#include "adcraft/resources.hpp"

using namespace adcraft;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;
constexpr int exit_overflow = 3;

/// Bad flag values found after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted = true; }

std::string px(double v) { return render::format_number(std::round(v * 100.0) / 100.0); }

CanvasSize size_arg(const std::string& text, const char* flag)
{
    auto s = parse_size(text);
    if (!s || s->width < 1 || s->height < 1)
        throw UsageError(fmt::format("{}: expected WxH, got \"{}\"", flag, text));
    return *s;
}

struct Global {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    bool quiet = false;

    backends::AppConfig load() const
    {
        auto c = config_path.empty() ? backends::default_config() : backends::load_config(config_path);
        if (seed)
            c.seed = *seed;
        if (c.resource_dir)
            set_resource_override_dir(*c.resource_dir);
        return c;
    }
};

struct GenerateArgs {
    std::string logo, request, size, sizes, out = "runs", id = "banner";
    std::optional<int> refine, variations;
    bool figma = false, clamp = false;
};

int cmd_generate(const Global& g, const GenerateArgs& a)
{
    if (a.size.empty() && a.sizes.empty())
        throw UsageError("generate needs --size or --sizes");
    std::vector<CanvasSize> sizes;
    if (!a.sizes.empty()) {
        try {
            sizes = parse_size_list(a.sizes);
        } catch (const InvalidArgument& e) {
            throw UsageError(std::string("--sizes: ") + e.what());
        }
    } else {
        sizes.push_back(size_arg(a.size, "--size"));
    }
    auto config = g.load();
    if (a.refine)
        config.pipeline.refine_iters = *a.refine;
    if (a.variations)
        config.pipeline.variations = *a.variations;
    config.pipeline.figma = config.pipeline.figma || a.figma;
    config.pipeline.clamp = config.pipeline.clamp || a.clamp;
    if (config.pipeline.refine_iters < 0 || config.pipeline.variations < 0)
        throw UsageError("--refine and --variations must be >= 0");

    BannerRequest req;
    req.id = a.id;
    req.logo = a.logo;
    req.requirement_text = fs::is_regular_file(a.request) ? read_text_file(a.request) : a.request;
    auto providers = agents::make_providers(config);
    agents::RunOptions opts;
    opts.out_root = a.out;

    std::vector<agents::RunOutcome> outcomes;
    if (sizes.size() == 1) {
        req.width = sizes[0].width;
        req.height = sizes[0].height;
        outcomes.push_back(agents::run_pipeline(req, config, providers, opts));
    } else {
        outcomes = agents::run_multi_size(req, sizes, config, providers, opts);
    }
    int rc = exit_ok;
    for (const auto& o : outcomes) {
        if (o.ok()) {
            std::cout << o.archive.string() << "\n";
        } else {
            std::cerr << fmt::format("error: {} failed at stage {}: {}\n", o.record.request_id,
                                     o.record.failed_stage.value_or("?"), o.record.error.value_or(""));
            rc = exit_runtime;
        }
    }
    return rc;
}

int cmd_refine(const Global& g, const std::string& run, int iters)
{
    if (iters < 1)
        throw UsageError("--iters must be >= 1");
    auto config = g.load();
    auto out = agents::refine_archive(run, iters, config, agents::make_providers(config));
    if (!out.ok()) {
        std::cerr << fmt::format("error: refinement failed at stage {}: {}\n", out.record.failed_stage.value_or("?"),
                                 out.record.error.value_or(""));
        return exit_runtime;
    }
    std::cout << fmt::format("{}: {} iterations, verdict {}\n", out.archive.string(), out.record.iterations.size(),
                             out.record.final_verdict.empty() ? "none" : out.record.final_verdict);
    return exit_ok;
}

Blueprint read_blueprint(const std::string& path)
{
    auto parsed = parse_blueprint(read_text_file(path));
    if (!parsed.ok())
        throw SchemaViolation(parsed.violations);
    return *parsed.blueprint;
}

struct RenderArgs {
    std::string blueprint, background, logo, out, png;
    bool figma = false, clamp = false, link = false;
};

int cmd_render(const Global& g, const RenderArgs& a)
{
    auto config = g.load();
    auto bp = read_blueprint(a.blueprint);
    render::AssetStore assets;
    if (!a.background.empty()) {
        auto bg = load_png(a.background);
        if (bg.width() == bp.canvas.width && bg.height() == bp.canvas.height)
            assets.add_file(bp.background_ref, a.background);
        else
            assets.add(bp.background_ref, agents::fit_image(bg, bp.canvas.width, bp.canvas.height),
                       fs::path(a.background).filename().string());
    }
    if (!a.logo.empty())
        assets.add_file("logo", a.logo);
    auto lay = layout::resolve_layout(bp, config.pipeline.metrics, assets.sizes());
    if (a.clamp || config.pipeline.clamp)
        lay = layout::clamp_into_canvas(lay, config.pipeline.clamp_margin);
    render::SvgOptions so;
    so.embed_assets = !a.link;
    const fs::path out(a.out);
    if (out.has_parent_path())
        fs::create_directories(out.parent_path());
    auto svg = render::emit_svg(lay, bp, assets, so);
    write_text_file(out, svg);
    if (!a.png.empty()) {
        auto raster = render::make_rasterizer(config.rasterizer_command, out.parent_path());
        save_png(raster->rasterize(a.link ? render::emit_svg(lay, bp, assets) : svg), a.png);
    }
    if (a.figma) {
        auto plugin = render::emit_figma_plugin(lay, bp, assets, render::default_figma_template());
        const auto dir = out.parent_path() / "figma";
        fs::create_directories(dir);
        write_text_file(dir / "code.js", plugin.code);
        write_text_file(dir / "manifest.json", plugin.manifest.dump(2) + "\n");
    }
    auto overflow = layout::detect_overflow(lay);
    if (overflow.overflow_elements > 0)
        spdlog::warn("{} of {} elements extend past the canvas", overflow.overflow_elements, overflow.total_elements);
    return exit_ok;
}

struct CheckArgs {
    std::string blueprint, size, logo, logo_size, background;
    bool json = false, clamp = false;
};

int cmd_check(const Global& g, const CheckArgs& a)
{
    auto config = g.load();
    std::optional<CanvasSize> want;
    if (!a.size.empty())
        want = size_arg(a.size, "--size");
    auto parsed = parse_blueprint(read_text_file(a.blueprint));
    json report;
    report["blueprint"] = a.blueprint;
    if (!parsed.ok()) {
        if (a.json) {
            json v = json::array();
            for (const auto& x : parsed.violations)
                v.push_back({{"code", x.code}, {"path", x.path}, {"message", x.message}});
            std::cout << json{{"blueprint", a.blueprint}, {"valid", false}, {"violations", v}}.dump(2) << "\n";
        } else {
            std::cerr << "invalid blueprint:\n" << format_violations(parsed.violations);
        }
        return exit_runtime;
    }
    const auto& bp = *parsed.blueprint;
    layout::AssetSizes sizes;
    if (!a.logo.empty()) {
        auto img = load_png(a.logo);
        sizes["logo"] = {img.width(), img.height()};
    } else if (!a.logo_size.empty()) {
        auto s = size_arg(a.logo_size, "--logo-size");
        sizes["logo"] = {s.width, s.height};
    }
    std::optional<Image> background;
    if (!a.background.empty())
        background = agents::fit_image(load_png(a.background), bp.canvas.width, bp.canvas.height);

    auto lay = layout::resolve_layout(bp, config.pipeline.metrics, sizes);
    if (a.clamp)
        lay = layout::clamp_into_canvas(lay, config.pipeline.clamp_margin);
    auto overflow = layout::detect_overflow(lay);
    auto spacing = layout::spacing_diagnostics(lay);
    auto contrast = layout::contrast_diagnostics(bp, lay, background ? &*background : nullptr);
    const bool size_ok = !want || *want == bp.canvas;

    if (a.json) {
        report["valid"] = true;
        report["canvas"] = format_size(bp.canvas);
        report["size_matches"] = size_ok;
        report["overflow"] = layout::to_json(overflow);
        json boxes = json::array();
        for (const auto& b : lay.boxes)
            boxes.push_back({{"id", b.id}, {"x", b.x}, {"y", b.y}, {"width", b.width}, {"height", b.height}});
        report["boxes"] = boxes;
        json sp = json::array(), ct = json::array();
        for (const auto& s : spacing)
            sp.push_back(layout::to_json(s));
        for (const auto& c : contrast)
            ct.push_back(layout::to_json(c));
        report["spacing"] = sp;
        report["contrast"] = ct;
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << fmt::format("{}: {} canvas, {} elements\n", a.blueprint, format_size(bp.canvas),
                                 lay.boxes.size());
        if (!size_ok)
            std::cout << fmt::format("size: expected {}, blueprint declares {}\n", format_size(*want),
                                     format_size(bp.canvas));
        std::cout << fmt::format("overflow: {}/{} elements ({:.2f}%)\n", overflow.overflow_elements,
                                 overflow.total_elements, overflow.percent());
        for (const auto& id : overflow.overflow_ids) {
            const auto* b = lay.find(id);
            std::cout << fmt::format("  {} at ({}, {}) size {}x{} leaves the canvas\n", id,
                                     px(b->x), px(b->y), px(b->width), px(b->height));
        }
        for (const auto& s : spacing)
            std::cout << "spacing: " << s.message << "\n";
        for (const auto& c : contrast)
            if (!c.passes)
                std::cout << fmt::format("contrast: {} {:.2f}:1{}\n", c.id, c.ratio,
                                         c.assumed_background ? " (white background assumed)" : "");
    }
    if (overflow.overflow_elements > 0)
        return exit_overflow;
    return size_ok ? exit_ok : exit_runtime;
}

struct BatchArgs {
    std::string requests, sizes, out;
    bool expand = false;
    std::optional<int> workers, refine, variations;
};

int cmd_batch(const Global& g, const BatchArgs& a)
{
    auto config = g.load();
    if (a.refine)
        config.pipeline.refine_iters = *a.refine;
    if (a.variations)
        config.pipeline.variations = *a.variations;
    auto reqs = bench::load_requests(a.requests);
    if (a.expand || !a.sizes.empty())
        reqs = bench::expand_sizes(reqs, a.sizes.empty() ? bench::default_sizes() : bench::load_sizes(a.sizes));
    for (const auto& r : reqs)
        if (!r.size)
            throw UsageError("request " + r.id + " has no size; add \"size\" or pass --expand-sizes");
    bench::BatchOptions opts;
    opts.out_dir = a.out;
    opts.workers = a.workers.value_or(config.pipeline.workers);
    if (opts.workers < 1)
        throw UsageError("--workers must be >= 1");
    opts.cancel = &g_interrupted;
    std::signal(SIGINT, on_sigint);
    auto m = bench::run_batch(reqs, config, agents::make_providers(config), opts);
    std::signal(SIGINT, SIG_DFL);
    std::cout << fmt::format("{} requests: {} run, {} skipped, {} failed{}; total ${:.3f}\n", m.entries.size(),
                             m.executed, m.skipped, m.failures(), m.interrupted ? " (interrupted)" : "",
                             m.total.total);
    std::cout << (fs::path(a.out) / bench::manifest_name).string() << "\n";
    return m.ok() ? exit_ok : exit_runtime;
}

struct EvalArgs {
    std::string runs, metrics, report, csv;
    bool judge = false, json = false, clamp = false;
    std::optional<int> workers;
};

int cmd_eval(const Global& g, const EvalArgs& a)
{
    auto config = g.load();
    eval::EvalOptions opts;
    if (!a.metrics.empty()) {
        try {
            opts.metrics = eval::parse_metric_list(a.metrics);
        } catch (const InvalidArgument& e) {
            throw UsageError(std::string("--metrics: ") + e.what());
        }
    }
    opts.workers = a.workers.value_or(config.pipeline.workers);
    opts.clamp = a.clamp;
    opts.clamp_margin = config.pipeline.clamp_margin;
    opts.text_metrics = config.pipeline.metrics;
    opts.rates = config.rates;
    auto archives = eval::find_archives(a.runs);
    std::optional<backends::ChatClient> judge;
    if (a.judge) {
        judge.emplace(backends::make_chat_provider(config.judge, config.seed),
                      std::make_shared<backends::UsageLedger>(), config.judge.retry);
        judge->temperature = config.judge.temperature;
    }
    auto report = eval::evaluate_batch(archives, judge ? &*judge : nullptr, opts);
    auto j = eval::to_json(report);
    if (!a.report.empty()) {
        if (fs::path(a.report).has_parent_path())
            fs::create_directories(fs::path(a.report).parent_path());
        write_text_file(a.report, j.dump(2) + "\n");
    }
    if (!a.csv.empty())
        write_text_file(a.csv, eval::to_csv(report));
    if (a.json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << fmt::format("{} banners ({} failed)\n", report.banners.size(), report.failed_banners);
        std::cout << fmt::format("overflow: {}/{} elements ({:.2f}%)\n", report.overflow.overflow_elements,
                                 report.overflow.total_elements, report.overflow.percent());
        std::cout << fmt::format("spacing findings: {}\n", report.spacing_violations);
        for (const auto& [m, s] : report.metrics)
            std::cout << fmt::format("{:<5} {:.2f}  (n={})\n", eval::to_string(m), s.mean, s.count);
        std::cout << fmt::format("generation cost: ${:.3f}\n", report.generation_cost.total);
        if (report.judge_cost)
            std::cout << fmt::format("judge cost: ${:.3f}\n", report.judge_cost->total);
    }
    return exit_ok;
}

int cmd_cost(const Global& g, const std::string& runs, const std::string& rates_path, bool as_json)
{
    auto config = g.load();
    auto rates = config.rates;
    if (!rates_path.empty())
        rates = backends::rates_from_json(json::parse(read_text_file(rates_path)), rates);
    struct Row {
        std::string name;
        CostBreakdown cost;
    };
    std::vector<Row> rows;
    CostBreakdown total;
    for (const auto& dir : eval::find_archives(runs)) {
        auto rec = agents::load_run_record(dir);
        auto c = backends::compute_cost(rec.usage, rates);
        rows.push_back({rec.request_id, c});
        total.prompt_tokens += c.prompt_tokens;
        total.completion_tokens += c.completion_tokens;
        total.images += c.images;
        total.llm_cost += c.llm_cost;
        total.image_cost += c.image_cost;
        total.total += c.total;
    }
    if (as_json) {
        json arr = json::array();
        for (const auto& r : rows) {
            json e = to_json(r.cost);
            e["request_id"] = r.name;
            arr.push_back(e);
        }
        std::cout << json{{"rates", backends::to_json(rates)}, {"runs", arr}, {"total", to_json(total)}}.dump(2)
                  << "\n";
        return exit_ok;
    }
    std::cout << fmt::format("{:<32} {:>14} {:>17} {:>7} {:>9} {:>11} {:>8}\n", "Run", "Prompt Tokens",
                             "Completion Tokens", "Images", "LLM Cost", "Image Cost", "Total");
    auto line = [](const std::string& name, const CostBreakdown& c) {
        return fmt::format("{:<32} {:>14} {:>17} {:>7} {:>9} {:>11} {:>8}\n", name, c.prompt_tokens,
                           c.completion_tokens, c.images, fmt::format("${:.3f}", backends::round_cost(c.llm_cost)),
                           fmt::format("${:.3f}", backends::round_cost(c.image_cost)),
                           fmt::format("${:.3f}", backends::round_cost(c.total)));
    };
    for (const auto& r : rows)
        std::cout << line(r.name, r.cost);
    if (rows.size() > 1)
        std::cout << line("Total", total);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    auto logger = spdlog::stderr_color_mt("adcraft");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");

    CLI::App app{"adcraft: multi-agent banner generation, rendering and evaluation"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Seed for stubs and judge presentation order");
    app.add_flag("-v,--verbose", g.verbose, "Debug logging");
    app.add_flag("-q,--quiet", g.quiet, "Warnings and errors only");

    std::function<int()> run;

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Run the generation pipeline");
    gen->add_option("--logo", ga.logo, "Logo image (PNG)")->required();
    gen->add_option("--request", ga.request, "Requirement text, or a file holding it")->required();
    gen->add_option("--size", ga.size, "Banner size WxH");
    gen->add_option("--sizes", ga.sizes, "Comma-separated sizes; one archive per size");
    gen->add_option("--refine", ga.refine, "Refinement rounds after the first design");
    gen->add_option("--variations", ga.variations, "Number of designs, the first included");
    gen->add_option("--out", ga.out, "Parent directory of run archives")->capture_default_str();
    gen->add_option("--id", ga.id, "Request id used in archive names")->capture_default_str();
    gen->add_flag("--figma", ga.figma, "Also emit Figma plugin code");
    gen->add_flag("--clamp", ga.clamp, "Clamp elements into the canvas");
    gen->callback([&] { run = [&] { return cmd_generate(g, ga); }; });

    std::string refine_run;
    int refine_iters = 4;
    auto* ref = app.add_subcommand("refine", "Continue refining an archived run");
    ref->add_option("--run", refine_run, "Run archive directory")->required()->check(CLI::ExistingDirectory);
    ref->add_option("--iters", refine_iters, "Additional refinement rounds")->capture_default_str();
    ref->callback([&] { run = [&] { return cmd_refine(g, refine_run, refine_iters); }; });

    RenderArgs ra;
    auto* ren = app.add_subcommand("render", "Lower a blueprint to SVG without any model calls");
    ren->add_option("--blueprint", ra.blueprint, "Blueprint JSON")->required()->check(CLI::ExistingFile);
    ren->add_option("--background", ra.background, "Background image (PNG)")->check(CLI::ExistingFile);
    ren->add_option("--logo", ra.logo, "Logo image (PNG)")->check(CLI::ExistingFile);
    ren->add_option("--out", ra.out, "Output SVG path")->required();
    ren->add_option("--png", ra.png, "Also write a raster");
    ren->add_flag("--figma", ra.figma, "Also write figma/code.js and figma/manifest.json next to the SVG");
    ren->add_flag("--clamp", ra.clamp, "Clamp elements into the canvas");
    ren->add_flag("--link-assets", ra.link, "Reference images by filename instead of embedding them");
    ren->callback([&] { run = [&] { return cmd_render(g, ra); }; });

    CheckArgs ca;
    auto* chk = app.add_subcommand("check", "Validate a blueprint and report geometry diagnostics");
    chk->add_option("--blueprint", ca.blueprint, "Blueprint JSON")->required()->check(CLI::ExistingFile);
    chk->add_option("--size", ca.size, "Expected canvas WxH");
    chk->add_option("--logo", ca.logo, "Logo image for intrinsic logo sizing")->check(CLI::ExistingFile);
    chk->add_option("--logo-size", ca.logo_size, "Logo pixel size WxH when no image is at hand");
    chk->add_option("--background", ca.background, "Background image for contrast checks")->check(CLI::ExistingFile);
    chk->add_flag("--clamp", ca.clamp, "Clamp before measuring overflow");
    chk->add_flag("--json", ca.json, "Machine-readable output");
    chk->callback([&] { run = [&] { return cmd_check(g, ca); }; });

    BatchArgs ba;
    auto* bat = app.add_subcommand("batch", "Run a request file through the pipeline");
    bat->add_option("--requests", ba.requests, "requests.jsonl")->required()->check(CLI::ExistingFile);
    bat->add_flag("--expand-sizes", ba.expand, "Expand every request over the size table");
    bat->add_option("--sizes", ba.sizes, "sizes.json replacing the built-in table")->check(CLI::ExistingFile);
    bat->add_option("--out", ba.out, "Output directory")->required();
    bat->add_option("--workers", ba.workers, "Parallel runs");
    bat->add_option("--refine", ba.refine, "Refinement rounds per run");
    bat->add_option("--variations", ba.variations, "Designs per run");
    bat->callback([&] { run = [&] { return cmd_batch(g, ba); }; });

    EvalArgs ea;
    auto* ev = app.add_subcommand("eval", "Evaluate run archives");
    ev->add_option("--runs", ea.runs, "Directory of run archives")->required()->check(CLI::ExistingDirectory);
    ev->add_flag("--judge", ea.judge, "Score the six metrics with the judge model");
    ev->add_option("--metrics", ea.metrics, "Metric subset, e.g. TAA,AQS");
    ev->add_option("--report", ea.report, "JSON report path");
    ev->add_option("--csv", ea.csv, "CSV report path");
    ev->add_option("--workers", ea.workers, "Parallel banners");
    ev->add_flag("--clamp", ea.clamp, "Measure overflow after clamping");
    ev->add_flag("--json", ea.json, "Print the JSON report");
    ev->callback([&] { run = [&] { return cmd_eval(g, ea); }; });

    std::string cost_runs, cost_rates;
    bool cost_json = false;
    auto* cst = app.add_subcommand("cost", "Cost breakdown of run archives");
    cst->add_option("--runs", cost_runs, "Run archive or directory of archives")->required()->check(CLI::ExistingPath);
    cst->add_option("--rates", cost_rates, "Rates JSON overriding the configured rates")->check(CLI::ExistingFile);
    cst->add_flag("--json", cost_json, "Machine-readable output");
    cst->callback([&] { run = [&] { return cmd_cost(g, cost_runs, cost_rates, cost_json); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }
    spdlog::set_level(g.quiet ? spdlog::level::warn : g.verbose ? spdlog::level::debug : spdlog::level::info);

    try {
        return run();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const SchemaViolation& e) {
        std::cerr << "error: invalid blueprint:\n" << format_violations(e.violations());
        return exit_runtime;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}
