// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sys/wait.h>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "adcraft/agents/background.hpp"
#include "adcraft/agents/designer.hpp"
#include "adcraft/agents/pipeline.hpp"
#include "adcraft/backends/chat.hpp"
#include "adcraft/backends/config.hpp"
#include "adcraft/backends/cost.hpp"
#include "adcraft/backends/t2i.hpp"
#include "adcraft/bench/bench.hpp"
#include "adcraft/blueprint_io.hpp"
#include "adcraft/errors.hpp"
#include "adcraft/eval/stats.hpp"
#include "adcraft/layout/diagnostics.hpp"
#include "adcraft/layout/resolve.hpp"
#include "adcraft/render/svg.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/stats_oracle.hpp"
#include "support/svg_probe.hpp"

using namespace adcraft;
namespace fs = std::filesystem;

namespace {

/// Collects failed expectations for one criterion.
class Checks {
public:
    void expect(bool ok, const std::string& what)
    {
        ++count_;
        if (!ok && failures_.size() < 5)
            failures_.push_back(what);
        failed_ += !ok;
    }
    bool ok() const { return failed_ == 0; }
    int count() const { return count_; }
    int failed() const { return failed_; }
    const std::vector<std::string>& failures() const { return failures_; }

private:
    int count_ = 0;
    int failed_ = 0;
    std::vector<std::string> failures_;
};

struct Criterion {
    int number;
    std::string title;
    double limit_seconds; // 0 = no runtime bound
    std::function<void(Checks&)> body;
};

BannerRequest sample_request(int w = 300, int h = 250)
{
    BannerRequest r;
    r.id = "acc";
    r.requirement_text = "Promote a winter coat clearance to young professionals, 40% off this week.";
    r.width = w;
    r.height = h;
    return r;
}

Image sample_logo()
{
    Image img(140, 70);
    img.fill_rect(10, 5, 120, 60, Color::rgb(200, 40, 40));
    return img;
}

// 1 -----------------------------------------------------------------------

void text_free_loop(Checks& c)
{
    const BannerObjectives obj{"Clear winter stock", "young professionals", "crisp, bold"};
    for (int k = 0; k <= 5; ++k) {
        auto chat_provider = backends::make_demo_chat_provider(1);
        auto ledger = std::make_shared<backends::UsageLedger>();
        backends::ChatClient chat(chat_provider, ledger);
        auto stub = std::make_shared<backends::StubT2IProvider>(backends::default_t2i_sizes(), k);
        backends::ImageClient images(stub, ledger);
        auto r = agents::prepare_background(sample_request(), obj, sample_logo(), chat, images);
        const int expected = std::min(k + 1, 5);
        c.expect(stub->call_count() == expected,
                 fmt::format("k={}: {} generation calls, expected {}", k, stub->call_count(), expected));
        c.expect(r.provenance.attempts == expected, fmt::format("k={}: attempts {}", k, r.provenance.attempts));
        c.expect(r.provenance.still_has_text == (k >= 5), fmt::format("k={}: still_has_text flag", k));
    }

    auto dir = fixtures::temp_dir("acceptance-existing");
    save_png(Image(400, 400, Color::rgb(10, 200, 10)), dir / "backdrop.png");
    auto req = sample_request();
    req.requirement_text = "Use backdrop.png as the background.";
    auto ledger = std::make_shared<backends::UsageLedger>();
    backends::ChatClient chat(backends::make_demo_chat_provider(1), ledger);
    auto stub = std::make_shared<backends::StubT2IProvider>();
    backends::ImageClient images(stub, ledger);
    agents::BackgroundOptions opts;
    opts.base_dir = dir;
    auto r = agents::prepare_background(req, obj, sample_logo(), chat, images, opts);
    c.expect(stub->call_count() == 0, fmt::format("existing path: {} generation calls", stub->call_count()));
    c.expect(r.provenance.found_existing, "existing path not used");
    fs::remove_all(dir);
}

// 2 -----------------------------------------------------------------------

struct Box {
    double x, y, w, h;
};

// Fixed-point sweep: repeatedly place any element whose reference is already
// placed. Shares nothing with the resolver's graph ordering.
std::map<std::string, Box> sweep_resolve(const Blueprint& bp, const layout::TextMetricsTable& m)
{
    auto frac = [](NinePoint p) {
        const int i = static_cast<int>(p);
        return std::pair<double, double>{(i % 3) * 0.5, (i / 3) * 0.5};
    };
    std::map<std::string, Box> placed;
    placed["canvas"] = {0, 0, double(bp.canvas.width), double(bp.canvas.height)};
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& e : bp.elements) {
            if (placed.count(e.id))
                continue;
            double w, h;
            if (auto ex = std::get_if<ExplicitSize>(&e.size)) {
                w = ex->width;
                h = ex->height;
            } else {
                const auto& t = std::get<TextContent>(e.content).text;
                w = double(t.size()) * m.advance_ratio(e.style.font_weight) * e.style.font_size;
                h = m.line_height * e.style.font_size;
            }
            if (auto a = std::get_if<AbsolutePosition>(&e.position)) {
                placed[e.id] = {a->x, a->y, w, h};
                progress = true;
                continue;
            }
            const auto& r = std::get<RelativePosition>(e.position);
            auto ref = placed.find(r.reference);
            if (ref == placed.end())
                continue;
            auto [rx, ry] = frac(r.ref_anchor);
            auto [sx, sy] = frac(r.self_anchor);
            placed[e.id] = {ref->second.x + rx * ref->second.w + r.offset.dx - sx * w,
                            ref->second.y + ry * ref->second.h + r.offset.dy - sy * h, w, h};
            progress = true;
        }
    }
    placed.erase("canvas");
    return placed;
}

void resolver_oracle(Checks& c)
{
    std::mt19937 rng(20240601);
    const auto m = fixtures::dyadic_metrics();
    for (int iter = 0; iter < 1000; ++iter) {
        auto bp = fixtures::random_acyclic(rng, 1 + int(rng() % 12));
        std::shuffle(bp.elements.begin(), bp.elements.end(), rng); // forward references too
        auto lay = layout::resolve_layout(bp, m);
        auto oracle = sweep_resolve(bp, m);
        c.expect(oracle.size() == bp.elements.size() && lay.boxes.size() == bp.elements.size(),
                 fmt::format("blueprint {}: element count", iter));
        for (const auto& b : lay.boxes) {
            auto it = oracle.find(b.id);
            bool same = it != oracle.end() && b.x == it->second.x && b.y == it->second.y &&
                        b.width == it->second.w && b.height == it->second.h;
            c.expect(same, fmt::format("blueprint {}: box {} differs from the sweep", iter, b.id));
        }
    }

    for (int iter = 0; iter < 100; ++iter) {
        auto bp = fixtures::random_acyclic(rng, 2 + int(rng() % 10));
        const std::size_t len = 1 + rng() % std::min<std::size_t>(bp.elements.size(), 5);
        std::vector<std::size_t> ring(bp.elements.size());
        std::iota(ring.begin(), ring.end(), 0);
        std::shuffle(ring.begin(), ring.end(), rng);
        ring.resize(len);
        std::set<std::string> members;
        for (std::size_t i = 0; i < len; ++i) {
            auto& e = bp.elements[ring[i]];
            members.insert(e.id);
            e.position = fixtures::rel(bp.elements[ring[(i + 1) % len]].id, NinePoint::center, NinePoint::center);
        }
        try {
            layout::resolve_layout(bp, m);
            c.expect(false, fmt::format("cycle {}: no error", iter));
        } catch (const CyclicReference& e) {
            std::set<std::string> got(e.ids().begin(), e.ids().end());
            c.expect(got == members, fmt::format("cycle {}: reported ids differ", iter));
        }

        auto dangling = fixtures::random_acyclic(rng, 1 + int(rng() % 10));
        dangling.elements[rng() % dangling.elements.size()].position =
            fixtures::rel("ghost_" + std::to_string(iter), NinePoint::top_left, NinePoint::top_left);
        try {
            layout::resolve_layout(dangling, m);
            c.expect(false, fmt::format("dangling {}: no error", iter));
        } catch (const MissingReference&) {
            c.expect(true, "");
        }
    }
}

// 3 -----------------------------------------------------------------------

layout::OverflowReport synthetic_overflow(int designs, int per_design, int overflowing)
{
    layout::OverflowReport pooled;
    int left = overflowing;
    for (int d = 0; d < designs; ++d) {
        const int here = std::min(left, (overflowing + designs - 1) / designs);
        left -= here;
        Blueprint bp;
        bp.canvas = {300, 250};
        for (int i = 0; i < per_design; ++i)
            bp.elements.push_back(fixtures::box_el(
                "s" + std::to_string(i),
                AbsolutePosition{i < here ? 295.0 : double(i % 280), double(i % 230)}, 10, 10));
        pooled.merge(layout::detect_overflow(layout::resolve_layout(bp, layout::TextMetricsTable{})));
    }
    return pooled;
}

void overflow_table(Checks& c)
{
    struct Row {
        int designs, per_design, overflowing;
        double expected;
    };
    for (auto row : {Row{10, 222, 41, 1.85}, Row{10, 251, 26, 1.04}}) {
        auto r = synthetic_overflow(row.designs, row.per_design, row.overflowing);
        c.expect(r.total_elements == std::size_t(row.designs * row.per_design) &&
                     r.overflow_elements == std::size_t(row.overflowing),
                 fmt::format("counts {}/{}", r.overflow_elements, r.total_elements));
        c.expect(std::abs(r.percent() - row.expected) <= 0.005,
                 fmt::format("{}/{} gives {:.4f}%, expected {:.2f}%", r.overflow_elements, r.total_elements,
                             r.percent(), row.expected));
    }
}

// 4 -----------------------------------------------------------------------

void cost_table(Checks& c)
{
    struct Row {
        const char* name;
        long long prompt, completion;
        int images;
        double llm, image, total;
    };
    const Row rows[] = {
        {"figma single", 78266, 5470, 1, 0.317, 0.002, 0.319},
        {"svg single", 15921, 2672, 1, 0.088, 0.002, 0.090},
        {"figma refinement", 284677, 23772, 1, 1.211, 0.002, 1.213},
        {"svg refinement", 54362, 12663, 1, 0.353, 0.002, 0.355},
        {"figma four variations", 261150, 15213, 4, 1.012, 0.008, 1.020},
        {"svg four variations", 24865, 6006, 4, 0.165, 0.008, 0.173},
    };
    backends::Rates rates;
    rates.input_per_mtok = 3.0;
    rates.output_per_mtok = 15.0;
    rates.image_per_megapixel = 0.0027;
    for (const auto& row : rows) {
        std::vector<UsageRecord> records{{"designer", "llm", row.prompt, row.completion, 0, 0.0}};
        for (int i = 0; i < row.images; ++i)
            records.push_back({"background_designer", "t2i", 0, 0, 1, 1024 * 864 / 1e6});
        auto cost = backends::compute_cost(records, rates);
        auto near = [](double a, double b) { return std::abs(a - b) <= 0.001 + 1e-9; };
        c.expect(near(cost.llm_cost, row.llm) && near(cost.image_cost, row.image) && near(cost.total, row.total),
                 fmt::format("{}: ${:.4f} + ${:.4f} = ${:.4f}, expected ${:.3f} + ${:.3f} = ${:.3f}", row.name,
                             cost.llm_cost, cost.image_cost, cost.total, row.llm, row.image, row.total));
    }
}

// 5 -----------------------------------------------------------------------

CanvasSize brute_force_size(CanvasSize target, const backends::SizeTable& table)
{
    const double ta = std::log(double(target.width) / target.height);
    auto err = [&](CanvasSize s) { return std::abs(std::log(double(s.width) / s.height) - ta); };
    std::optional<CanvasSize> best;
    for (bool need_cover : {true, false}) {
        for (auto s : table) {
            if (need_cover && (s.width < target.width || s.height < target.height))
                continue;
            if (!best || err(s) < err(*best) - 1e-12 ||
                (std::abs(err(s) - err(*best)) <= 1e-12 && long(s.width) * s.height < long(best->width) * best->height))
                best = s;
        }
        if (best)
            break;
    }
    return *best;
}

void size_selection(Checks& c)
{
    const auto& table = backends::default_t2i_sizes();
    auto pick = agents::select_t2i_size({300, 250}, table);
    c.expect(pick == CanvasSize{1024, 864}, "300x250 selects " + format_size(pick));
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> dim(16, 2000);
    for (int i = 0; i < 100; ++i) {
        CanvasSize t{dim(rng), dim(rng)};
        auto got = agents::select_t2i_size(t, table);
        auto want = brute_force_size(t, table);
        c.expect(got == want, fmt::format("{}: {} vs oracle {}", format_size(t), format_size(got), format_size(want)));
    }
}

// 6 -----------------------------------------------------------------------

void refinement_protocol(Checks& c)
{
    for (int approve_at : {1, 3, -1}) {
        auto provider = backends::make_demo_chat_provider(3);
        for (int t = 0; t <= 6; ++t)
            provider->push_for("reviewer", t == approve_at ? "Looks right.\nVERDICT: PRODUCTION_READY"
                                                           : "Tighten spacing.\nVERDICT: REVISE");
        auto config = backends::default_config();
        config.seed = 3;
        config.pipeline.refine_iters = 4;
        auto providers = agents::make_providers(config);
        providers.chat = provider;

        auto req = sample_request();
        auto dir = fixtures::temp_dir("acceptance-refine");
        save_png(sample_logo(), dir / "logo.png");
        req.logo = (dir / "logo.png").string();
        agents::RunOptions opts;
        opts.out_root = dir / "runs";
        opts.archive_name = "run";
        auto out = agents::run_pipeline(req, config, providers, opts);
        c.expect(out.ok(), "run failed: " + out.record.error.value_or(""));
        if (!out.ok())
            continue;

        const std::size_t want = approve_at < 0 ? 5 : std::size_t(approve_at + 1);
        const auto& its = out.record.iterations;
        c.expect(its.size() == want, fmt::format("approve at {}: {} iterations, expected {}", approve_at, its.size(), want));
        for (std::size_t t = 0; t < its.size(); ++t) {
            const auto d = out.archive / fmt::format("iter_{}", t);
            bool complete = fs::exists(d / "blueprint.json") && fs::exists(d / "banner.svg") &&
                            fs::exists(d / "render.png") && fs::exists(d / "review.txt");
            c.expect(complete, fmt::format("iter_{} incomplete", t));
            c.expect(fs::exists(d / "modifications.txt") == (t > 0), fmt::format("iter_{} modifications file", t));
            c.expect(its[t].t == int(t) && !its[t].verdict.empty(), fmt::format("iter_{} record", t));
        }
        c.expect(!fs::exists(out.archive / fmt::format("iter_{}", want)), "extra iteration archived");
        c.expect((approve_at >= 0) == (out.record.final_verdict == "production_ready"), "final verdict");
        fs::remove_all(dir);
    }

    // Memory counts after every iteration.
    auto provider = backends::make_demo_chat_provider(3);
    for (int t = 0; t < 6; ++t)
        provider->push_for("reviewer", "Needs work.\nVERDICT: REVISE");
    auto ledger = std::make_shared<backends::UsageLedger>();
    backends::ChatClient chat(provider, ledger, backends::RetryPolicy{1, std::chrono::milliseconds(0)});
    render::BoxCompositor raster;
    render::AssetStore assets;
    const agents::DesignBrief brief{sample_request(), {"Clear winter stock", "young professionals", "bold"},
                                    Image(300, 250, Color::rgb(90, 110, 140)), agents::trim_logo(sample_logo()).image,
                                    {}};
    assets.add("background", brief.background, "background.png");
    assets.add("logo", brief.logo, "logo_trimmed.png");
    bool counts_ok = true;
    agents::RefineDeps deps{chat, raster, assets, {}, {}, [&](const agents::IterationResult& it,
                                                              const agents::DesignMemory& m) {
                                counts_ok = counts_ok && m.feedback_count() == std::size_t(it.t + 1) &&
                                            m.modification_count() == std::size_t(it.t);
                            }};
    auto design = agents::design_foreground(brief, chat);
    auto r = agents::refine_loop(design, 4, brief, deps);
    c.expect(counts_ok, "memory holds t+1 feedback entries and t modification lists");
    c.expect(r.history.size() == 5 && !r.production_ready, "loop stops at max_iters = 4");
}

// 7 -----------------------------------------------------------------------

render::AssetStore fixture_assets(CanvasSize canvas)
{
    render::AssetStore s;
    s.add("background", fixtures::gradient_image(canvas.width, canvas.height), "background.png");
    s.add("logo", fixtures::logo_image(), "logo_trimmed.png");
    return s;
}

bool geometry_matches(const std::string& svg, const Blueprint& bp, const layout::ResolvedLayout& lay)
{
    auto doc = fixtures::parse_svg(svg);
    auto nodes = fixtures::element_nodes(doc);
    if (nodes.size() != bp.elements.size())
        return false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto* box = lay.find(nodes[i].first);
        const auto& n = *nodes[i].second;
        if (!box || nodes[i].first != bp.elements[i].id || n.get<double>("<xmlattr>.data-x") != box->x ||
            n.get<double>("<xmlattr>.data-y") != box->y || n.get<double>("<xmlattr>.data-width") != box->width ||
            n.get<double>("<xmlattr>.data-height") != box->height)
            return false;
    }
    return true;
}

void render_fidelity(Checks& c)
{
    auto bp = fixtures::six_element_fixture();
    auto assets = fixture_assets(bp.canvas);
    auto lay = layout::resolve_layout(bp, layout::TextMetricsTable{}, assets.sizes());
    auto first = render::emit_svg(lay, bp, assets);
    auto second = render::emit_svg(layout::resolve_layout(bp, layout::TextMetricsTable{}, assets.sizes()), bp,
                                   fixture_assets(bp.canvas));
    c.expect(first == second, "two renders differ");
    const auto golden = fixtures::data_dir() / "golden" / "six_element.svg";
    c.expect(fs::exists(golden) && read_text_file(golden) == first, "golden file differs");
    c.expect(geometry_matches(first, bp, lay), "six-element geometry");

    std::mt19937 rng(4242);
    for (int iter = 0; iter < 200; ++iter) {
        auto rb = fixtures::random_valid_blueprint(rng);
        auto ra = fixture_assets(rb.canvas);
        auto rl = layout::resolve_layout(rb, layout::TextMetricsTable{}, ra.sizes());
        c.expect(geometry_matches(render::emit_svg(rl, rb, ra), rb, rl),
                 fmt::format("random blueprint {}: element nodes or geometry differ", iter));
    }
}

// 8 -----------------------------------------------------------------------

int run_cli(const fs::path& cwd, const std::string& args)
{
    const auto cmd = fmt::format("cd '{}' && '{}' -q {} >/dev/null 2>cli_stderr.txt", cwd.string(), ADCRAFT_CLI, args);
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void end_to_end(Checks& c)
{
    auto dir = fixtures::temp_dir("acceptance-e2e");
    save_png(sample_logo(), dir / "logo.png");
    const std::string args = "generate --logo logo.png --request 'Winter coat clearance, 40% off this week' "
                             "--sizes 300x250,728x90,160x600 --refine 2 --clamp --id coat --out ";
    for (const char* out : {"a", "b"}) {
        int rc = run_cli(dir, std::string("--seed 7 ") + args + out);
        c.expect(rc == 0, fmt::format("generate run {} exited {}: {}", out, rc, read_text_file(dir / "cli_stderr.txt")));
    }

    auto records = [&](const char* out) {
        std::map<std::string, nlohmann::json> by_size;
        for (const auto& entry : fs::directory_iterator(dir / out)) {
            auto rec = agents::load_run_record(entry.path());
            by_size[format_size(rec.size)] = to_json(rec);

            const auto& last = rec.iterations.back();
            auto svg = read_text_file(entry.path() / last.svg_path);
            auto doc = fixtures::parse_svg(svg);
            auto bp = parse_blueprint(read_text_file(entry.path() / last.blueprint_path));
            auto nodes = fixtures::element_nodes(doc);
            c.expect(bp.ok() && nodes.size() == bp.blueprint->elements.size(),
                     format_size(rec.size) + ": SVG element nodes do not match the blueprint");
            int outside = 0;
            for (const auto& [id, node] : nodes) {
                const double x = node->get<double>("<xmlattr>.data-x"), y = node->get<double>("<xmlattr>.data-y");
                const double w = node->get<double>("<xmlattr>.data-width"),
                             h = node->get<double>("<xmlattr>.data-height");
                outside += x < 0 || y < 0 || x + w > rec.size.width || y + h > rec.size.height;
            }
            c.expect(outside == 0, fmt::format("{}: {} elements overflow after clamping", format_size(rec.size), outside));
            c.expect(doc.get<std::string>("svg.<xmlattr>.width") == std::to_string(rec.size.width),
                     format_size(rec.size) + ": svg width attribute");
        }
        return by_size;
    };
    auto a = records("a");
    auto b = records("b");
    c.expect(a.size() == 3, fmt::format("{} archives, expected 3", a.size()));
    for (const char* s : {"300x250", "728x90", "160x600"})
        c.expect(a.count(s) == 1, std::string("no archive for ") + s);
    c.expect(a == b, "same seed gave different run records");
    fs::remove_all(dir);
}

// 9 -----------------------------------------------------------------------

void statistics(Checks& c)
{
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> real(-10, 10);
    std::uniform_int_distribution<int> rating(1, 5);
    auto vec = [&](std::size_t n, bool integer) {
        std::vector<double> v(n);
        for (auto& x : v)
            x = integer ? rating(rng) : real(rng);
        return v;
    };
    auto varies = [](const std::vector<double>& v) {
        return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) != v.end();
    };
    int done = 0;
    while (done < 100) {
        auto x = vec(12, done % 2), y = vec(12, done % 2);
        if (!varies(x) || !varies(y))
            continue;
        std::vector<std::vector<double>> m{x, y, vec(12, done % 2)};
        ++done;
        c.expect(close(eval::pearson(x, y), fixtures::oracle_pearson(x, y)), "pearson vs definition");
        c.expect(close(eval::spearman(x, y),
                       fixtures::oracle_pearson(fixtures::oracle_ranks(x), fixtures::oracle_ranks(y))),
                 "spearman vs definition");
        c.expect(close(eval::icc(m), fixtures::oracle_icc21(m)), "icc vs definition");
    }
    std::vector<double> x{1, 2, 3, 4, 5}, neg{5, 4, 3, 2, 1};
    c.expect(eval::pearson(x, x) == 1.0 && eval::pearson(x, neg) == -1.0, "pearson trivial cases");
    c.expect(eval::spearman(x, x) == 1.0 && eval::spearman(x, neg) == -1.0, "spearman trivial cases");
    c.expect(eval::icc({x, x, x}) == 1.0, "icc perfect agreement");
}

// 10 ----------------------------------------------------------------------

void benchmark_expansion(Checks& c)
{
    std::vector<bench::BenchmarkRequest> reqs;
    for (int i = 0; i < 400; ++i)
        reqs.push_back({"req" + std::to_string(i), "logo.png", "intention", "audience", "purpose", std::nullopt,
                        std::nullopt});
    const auto& sizes = bench::default_sizes();
    auto all = bench::expand_sizes(reqs, sizes);
    std::set<std::string> ids;
    for (const auto& r : all)
        ids.insert(r.id);
    c.expect(sizes.size() == 13, fmt::format("{} sizes in the table", sizes.size()));
    c.expect(all.size() == 5200 && ids.size() == 5200,
             fmt::format("{} specifications, {} unique ids", all.size(), ids.size()));

    auto dir = fixtures::temp_dir("acceptance-batch");
    save_png(sample_logo(), dir / "logo.png");
    std::vector<bench::BenchmarkRequest> small;
    for (int i = 0; i < 2; ++i)
        small.push_back({"b" + std::to_string(i), (dir / "logo.png").string(), "Winter coat clearance",
                         "young professionals", "drive store visits", std::nullopt, std::nullopt});
    small = bench::expand_sizes(small, {{300, 250}, {728, 90}, {160, 600}});
    auto config = backends::default_config();
    auto providers = agents::make_providers(config);
    bench::BatchOptions opts;
    opts.out_dir = dir / "out";
    opts.workers = 3;
    auto first = bench::run_batch(small, config, providers, opts);
    c.expect(first.ok() && first.executed == 6, fmt::format("first pass executed {}", first.executed));
    if (first.entries.size() == 6) {
        fs::remove_all(opts.out_dir / first.entries[1].archive);
        fs::remove_all(opts.out_dir / first.entries[4].archive);
    }
    auto second = bench::run_batch(small, config, providers, opts);
    c.expect(second.ok() && second.executed == 2 && second.skipped == 4,
             fmt::format("resume executed {} and skipped {}", second.executed, second.skipped));
    int archives = 0;
    for (const auto& e : fs::directory_iterator(opts.out_dir))
        archives += e.is_directory();
    c.expect(archives == 6, fmt::format("{} archives after resume", archives));
    auto third = bench::run_batch(small, config, providers, opts);
    c.expect(third.executed == 0, "complete batch re-ran requests");
    fs::remove_all(dir);
}

// 11 ----------------------------------------------------------------------

void blueprint_round_trip(Checks& c)
{
    std::mt19937 rng(31337);
    int non_ascii = 0;
    for (int iter = 0; iter < 500; ++iter) {
        auto bp = fixtures::random_valid_blueprint(rng);
        auto text = serialize_blueprint(bp);
        non_ascii += std::any_of(text.begin(), text.end(), [](char ch) { return static_cast<unsigned char>(ch) > 127; });
        auto back = parse_blueprint(text);
        c.expect(back.ok() && *back.blueprint == bp && serialize_blueprint(*back.blueprint) == text,
                 fmt::format("blueprint {} does not survive a round trip", iter));
    }
    c.expect(non_ascii > 100, fmt::format("only {} blueprints carried non-ASCII copy", non_ascii));
}

} // namespace

int main()
{
    spdlog::set_level(spdlog::level::off);
    const std::vector<Criterion> criteria{
        {1, "text-free background loop issues min(k+1, 5) generations", 5, text_free_loop},
        {2, "resolver equals a brute-force evaluator on 1000 blueprints; cycles and dangling refs raise", 30,
         resolver_oracle},
        {3, "overflow rates 41/2220 and 26/2510 give 1.85% and 1.04%", 0, overflow_table},
        {4, "cost model matches the six reference cost rows", 0, cost_table},
        {5, "300x250 selects 1024x864; 100 random targets match exhaustive search", 0, size_selection},
        {6, "refinement memory counts, stop rule and complete version track", 0, refinement_protocol},
        {7, "golden SVG, exact geometry, element count on 200 random blueprints", 0, render_fidelity},
        {8, "offline generate at 300x250, 728x90, 160x600 with clamping; same seed, same records", 60, end_to_end},
        {9, "pearson, spearman and icc match definitions to 1e-9", 0, statistics},
        {10, "400 requests x 13 sizes = 5200 unique specifications; batch resumes", 0, benchmark_expansion},
        {11, "parse(serialize(b)) == b on 500 random blueprints", 0, blueprint_round_trip},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Checks checks;
        std::string error;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.body(checks);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = cr.limit_seconds == 0 || secs < cr.limit_seconds;
        const bool pass = checks.ok() && error.empty() && in_time && checks.count() > 0;
        failed += !pass;
        std::cout << fmt::format("{} [{:>2}] {} ({} checks, {:.2f}s)\n", pass ? "PASS" : "FAIL", cr.number, cr.title,
                                 checks.count(), secs);
        for (const auto& f : checks.failures())
            std::cout << "       - " << f << "\n";
        if (checks.failed() > int(checks.failures().size()))
            std::cout << fmt::format("       - ... {} more\n", checks.failed() - int(checks.failures().size()));
        if (!error.empty())
            std::cout << "       - exception: " << error << "\n";
        if (!in_time)
            std::cout << fmt::format("       - exceeded the {:.0f}s limit\n", cr.limit_seconds);
    }
    std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
