#include "adcraft/eval/report.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "adcraft/blueprint_io.hpp"
#include "adcraft/errors.hpp"
#include "adcraft/layout/resolve.hpp"

namespace adcraft::eval {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::vector<fs::path> find_archives(const fs::path& root)
{
    std::vector<fs::path> out;
    if (fs::is_regular_file(root / "run_record.json"))
        return {root};
    if (!fs::is_directory(root))
        throw InvalidArgument("not a directory: " + root.string());
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file() && entry.path().filename() == "run_record.json")
            out.push_back(entry.path().parent_path());
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

BannerEvaluation evaluate_one(const fs::path& archive, backends::ChatClient* judge, const EvalOptions& options)
{
    BannerEvaluation ev;
    ev.archive = archive.string();
    try {
        auto record = run_record_from_json(json::parse(read_text_file(archive / "run_record.json")));
        ev.request_id = record.request_id;
        ev.size = record.size;
        ev.cost = backends::compute_cost(record.usage, options.rates);
        if (record.status != "success")
            throw InvalidArgument("run did not succeed (failed stage: " + record.failed_stage.value_or("?") + ")");
        if (record.iterations.empty())
            throw InvalidArgument("run has no design");
        const auto& final_it = record.iterations.back();

        auto parsed = parse_blueprint(read_text_file(archive / final_it.blueprint_path));
        if (!parsed.ok())
            throw InvalidArgument(final_it.blueprint_path + ": " + format_violations(parsed.violations));
        layout::AssetSizes assets;
        if (!record.logo_path.empty() && fs::exists(archive / record.logo_path)) {
            auto logo = load_png(archive / record.logo_path);
            assets["logo"] = {logo.width(), logo.height()};
        }
        auto lay = layout::resolve_layout(*parsed.blueprint, options.text_metrics, assets);
        if (options.clamp)
            lay = layout::clamp_into_canvas(lay, options.clamp_margin);
        ev.overflow = layout::detect_overflow(lay);
        ev.spacing = layout::spacing_diagnostics(lay, options.spacing);

        if (judge) {
            Image render = load_png(archive / final_it.render_path);
            BannerRequest req;
            req.id = record.request_id;
            req.requirement_text = record.requirement_text;
            req.width = record.size.width;
            req.height = record.size.height;
            for (Metric m : options.metrics) {
                try {
                    ev.scores.push_back(score_metric(render, req, record.objectives, m, *judge));
                } catch (const ScoreParseFailure& e) {
                    spdlog::warn("{}: {}", ev.request_id, e.what());
                    ev.score_failures.push_back(m);
                }
            }
        }
    } catch (const std::exception& e) {
        spdlog::warn("cannot evaluate {}: {}", archive.string(), e.what());
        ev.error = e.what();
        ev.scores.clear();
    }
    return ev;
}

CostBreakdown add(CostBreakdown a, const CostBreakdown& b)
{
    a.llm_cost += b.llm_cost;
    a.image_cost += b.image_cost;
    a.total += b.total;
    a.prompt_tokens += b.prompt_tokens;
    a.completion_tokens += b.completion_tokens;
    a.images += b.images;
    return a;
}

} // namespace

MetricReport evaluate_batch(const std::vector<fs::path>& archives, backends::ChatClient* judge,
                            const EvalOptions& options)
{
    MetricReport report;
    report.judged = judge != nullptr;
    report.banners.resize(archives.size());
    const std::size_t ledger_start = judge ? judge->ledger()->size() : 0;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < archives.size(); i = next++)
            report.banners[i] = evaluate_one(archives[i], judge, options);
    };
    const int n = std::max(1, std::min<int>(options.workers, static_cast<int>(archives.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    std::map<Metric, double> sums;
    for (const auto& b : report.banners) {
        if (b.error) {
            ++report.failed_banners;
            continue;
        }
        report.overflow.merge(b.overflow);
        report.spacing_violations += b.spacing.size();
        report.generation_cost = add(report.generation_cost, b.cost);
        for (const auto& s : b.scores) {
            sums[s.metric] += s.score;
            ++report.metrics[s.metric].count;
        }
    }
    for (auto& [m, summary] : report.metrics)
        summary.mean = sums[m] / static_cast<double>(summary.count);
    if (judge) {
        auto records = judge->ledger()->records();
        std::vector<UsageRecord> mine(records.begin() + static_cast<std::ptrdiff_t>(ledger_start), records.end());
        report.judge_cost = backends::compute_cost(mine, options.rates);
    }
    return report;
}

namespace {

ordered_json cost_json(const CostBreakdown& c)
{
    ordered_json j;
    j["prompt_tokens"] = c.prompt_tokens;
    j["completion_tokens"] = c.completion_tokens;
    j["images"] = c.images;
    j["llm_cost"] = backends::round_cost(c.llm_cost, 6);
    j["image_cost"] = backends::round_cost(c.image_cost, 6);
    j["total"] = backends::round_cost(c.total, 6);
    return j;
}

ordered_json overflow_json(const layout::OverflowReport& r)
{
    ordered_json j;
    j["elements"] = r.total_elements;
    j["overflowing"] = r.overflow_elements;
    j["rate_percent"] = r.percent();
    return j;
}

} // namespace

ordered_json to_json(const MetricReport& report)
{
    ordered_json j;
    j["judged"] = report.judged;
    j["icc_variant"] = "ICC(2,1) two-way random, absolute agreement, single rater";
    j["banners_total"] = report.banners.size();
    j["banners_failed"] = report.failed_banners;
    j["overflow"] = overflow_json(report.overflow);
    j["spacing_violations"] = report.spacing_violations;
    j["generation_cost"] = cost_json(report.generation_cost);
    if (report.judged) {
        ordered_json means = ordered_json::object();
        for (const auto& [m, s] : report.metrics)
            means[std::string(to_string(m))] = {{"mean", s.mean}, {"count", s.count}};
        j["metrics"] = means;
        if (report.judge_cost)
            j["judge_cost"] = cost_json(*report.judge_cost);
    }
    ordered_json banners = ordered_json::array();
    for (const auto& b : report.banners) {
        ordered_json e;
        e["archive"] = b.archive;
        e["request_id"] = b.request_id;
        e["size"] = format_size(b.size);
        if (b.error) {
            e["error"] = *b.error;
            banners.push_back(e);
            continue;
        }
        e["overflow"] = overflow_json(b.overflow);
        e["overflow_ids"] = b.overflow.overflow_ids;
        ordered_json sp = ordered_json::array();
        for (const auto& v : b.spacing)
            sp.push_back(v.message);
        e["spacing"] = sp;
        e["cost"] = cost_json(b.cost);
        if (report.judged) {
            ordered_json scores = ordered_json::array();
            for (const auto& s : b.scores)
                scores.push_back({{"metric", to_string(s.metric)}, {"score", s.score}, {"rationale", s.rationale}});
            e["scores"] = scores;
            ordered_json failures = ordered_json::array();
            for (Metric m : b.score_failures)
                failures.push_back(to_string(m));
            e["score_failures"] = failures;
        }
        banners.push_back(e);
    }
    j["banners"] = banners;
    return j;
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

} // namespace

std::string to_csv(const MetricReport& report)
{
    std::string out = "request_id,size,status,elements,overflowing,spacing_violations,cost_total,metric,score\n";
    for (const auto& b : report.banners) {
        auto prefix = fmt::format("{},{},{},{},{},{},{:.6f}", csv_field(b.request_id), format_size(b.size),
                                  b.error ? "failed" : "ok", b.overflow.total_elements, b.overflow.overflow_elements,
                                  b.spacing.size(), b.cost.total);
        if (!report.judged || b.error) {
            out += prefix + ",,\n";
            continue;
        }
        for (const auto& s : b.scores)
            out += fmt::format("{},{},{}\n", prefix, to_string(s.metric), s.score);
        for (Metric m : b.score_failures)
            out += fmt::format("{},{},\n", prefix, to_string(m));
    }
    return out;
}

} // namespace adcraft::eval
