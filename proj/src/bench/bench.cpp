#include "adcraft/bench/bench.hpp"

#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "adcraft/errors.hpp"
#include "adcraft/image.hpp"

namespace adcraft::bench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string required_string(const json& j, const char* key, std::size_t line)
{
    auto it = j.find(key);
    if (it == j.end())
        throw FormatError(line, std::string("missing \"") + key + "\"");
    if (!it->is_string())
        throw FormatError(line, std::string("\"") + key + "\" must be a string");
    std::string v = it->get<std::string>();
    if (v.find_first_not_of(" \t") == std::string::npos)
        throw FormatError(line, std::string("\"") + key + "\" is empty");
    return v;
}

std::optional<CanvasSize> size_value(const json& s)
{
    if (s.is_string())
        return parse_size(s.get<std::string>());
    if (s.is_array() && s.size() == 2 && s[0].is_number_integer() && s[1].is_number_integer())
        return CanvasSize{s[0].get<int>(), s[1].get<int>()};
    if (s.is_object() && s.contains("width") && s.contains("height") && s["width"].is_number_integer() &&
        s["height"].is_number_integer())
        return CanvasSize{s["width"].get<int>(), s["height"].get<int>()};
    return std::nullopt;
}

} // namespace

std::vector<BenchmarkRequest> parse_requests(std::string_view text, const fs::path& base_dir, bool check_logos)
{
    std::vector<BenchmarkRequest> out;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string line(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw FormatError(line_no, std::string("not valid JSON: ") + e.what());
        }
        if (!j.is_object())
            throw FormatError(line_no, "record must be a JSON object");
        BenchmarkRequest r;
        r.id = required_string(j, "id", line_no);
        r.intention = required_string(j, "intention", line_no);
        r.audience = required_string(j, "audience", line_no);
        r.purpose = required_string(j, "purpose", line_no);
        fs::path logo = required_string(j, "logo", line_no);
        if (logo.is_relative() && !base_dir.empty())
            logo = base_dir / logo;
        r.logo = logo.string();
        if (check_logos && !fs::is_regular_file(logo))
            throw FormatError(line_no, "logo file not found: " + r.logo);
        if (auto p = j.find("t2i_prompt"); p != j.end() && !p->is_null()) {
            if (!p->is_string())
                throw FormatError(line_no, "\"t2i_prompt\" must be a string");
            r.t2i_prompt = p->get<std::string>();
        }
        if (auto s = j.find("size"); s != j.end() && !s->is_null()) {
            r.size = size_value(*s);
            if (!r.size || r.size->width < 1 || r.size->height < 1)
                throw FormatError(line_no, "invalid size " + s->dump());
        }
        if (!ids.insert(r.id).second)
            throw FormatError(line_no, "duplicate id \"" + r.id + "\"");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<BenchmarkRequest> load_requests(const fs::path& path, bool check_logos)
{
    return parse_requests(read_text_file(path), path.parent_path(), check_logos);
}

const std::vector<CanvasSize>& default_sizes()
{
    static const std::vector<CanvasSize> sizes{{300, 250}, {728, 90},  {160, 600}, {320, 50},  {300, 600},
                                               {970, 250}, {336, 280}, {468, 60},  {250, 250}, {200, 200},
                                               {120, 600}, {970, 90},  {320, 100}};
    return sizes;
}

std::vector<CanvasSize> load_sizes(const fs::path& path)
{
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw FormatError(0, path.string() + " is not valid JSON: " + e.what());
    }
    if (j.is_object() && j.contains("sizes"))
        j = j["sizes"];
    if (!j.is_array() || j.empty())
        throw FormatError(0, path.string() + ": expected a non-empty array of sizes");
    std::vector<CanvasSize> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto s = size_value(j[i]);
        if (!s || s->width < 1 || s->height < 1)
            throw FormatError(i + 1, "invalid size entry " + j[i].dump());
        out.push_back(*s);
    }
    return out;
}

std::vector<BenchmarkRequest> expand_sizes(const std::vector<BenchmarkRequest>& requests,
                                           const std::vector<CanvasSize>& sizes)
{
    std::vector<BenchmarkRequest> out;
    out.reserve(requests.size() * sizes.size());
    for (const auto& r : requests)
        for (const auto& s : sizes) {
            BenchmarkRequest e = r;
            e.id = r.id + "_" + format_size(s);
            e.size = s;
            out.push_back(std::move(e));
        }
    return out;
}

BannerRequest to_banner_request(const BenchmarkRequest& r)
{
    if (!r.size)
        throw InvalidArgument("request " + r.id + " has no size (give one or expand over a size table)");
    BannerRequest b;
    b.id = r.id;
    b.logo = r.logo;
    b.width = r.size->width;
    b.height = r.size->height;
    b.requirement_text =
        fmt::format("{}\nPrimary purpose: {}\nTarget audience: {}", r.intention, r.purpose, r.audience);
    return b;
}

std::size_t BatchManifest::failures() const
{
    std::size_t n = 0;
    for (const auto& e : entries)
        n += e.status != "success";
    return n;
}

const ManifestEntry* BatchManifest::find(std::string_view id) const
{
    for (const auto& e : entries)
        if (e.id == id)
            return &e;
    return nullptr;
}

json to_json(const BatchManifest& m)
{
    json entries = json::array();
    for (const auto& e : m.entries) {
        json j{{"id", e.id}, {"archive", e.archive}, {"status", e.status}, {"cost", to_json(e.cost)}};
        if (e.failed_stage)
            j["failed_stage"] = *e.failed_stage;
        if (e.error)
            j["error"] = *e.error;
        entries.push_back(j);
    }
    return json{{"entries", entries},
                {"total_cost", to_json(m.total)},
                {"executed", m.executed},
                {"skipped", m.skipped},
                {"failures", m.failures()},
                {"interrupted", m.interrupted}};
}

BatchManifest manifest_from_json(const json& j)
{
    BatchManifest m;
    try {
        for (const auto& e : j.at("entries")) {
            ManifestEntry me;
            me.id = e.at("id").get<std::string>();
            me.archive = e.at("archive").get<std::string>();
            me.status = e.at("status").get<std::string>();
            if (e.contains("failed_stage"))
                me.failed_stage = e["failed_stage"].get<std::string>();
            if (e.contains("error"))
                me.error = e["error"].get<std::string>();
            if (e.contains("cost")) {
                const auto& c = e["cost"];
                me.cost.llm_cost = c.value("llm_cost", 0.0);
                me.cost.image_cost = c.value("image_cost", 0.0);
                me.cost.total = c.value("total", 0.0);
                me.cost.prompt_tokens = c.value("prompt_tokens", 0LL);
                me.cost.completion_tokens = c.value("completion_tokens", 0LL);
                me.cost.images = c.value("images", 0);
            }
            m.entries.push_back(std::move(me));
        }
        m.executed = j.value("executed", std::size_t{0});
        m.skipped = j.value("skipped", std::size_t{0});
        m.interrupted = j.value("interrupted", false);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed batch manifest: ") + e.what());
    }
    return m;
}

namespace {

bool archive_succeeded(const fs::path& dir)
{
    try {
        return agents::load_run_record(dir).status == "success";
    } catch (const std::exception&) {
        return false;
    }
}

void add_cost(CostBreakdown& total, const CostBreakdown& c)
{
    total.llm_cost += c.llm_cost;
    total.image_cost += c.image_cost;
    total.total += c.total;
    total.prompt_tokens += c.prompt_tokens;
    total.completion_tokens += c.completion_tokens;
    total.images += c.images;
}

void write_manifest(const fs::path& out_dir, const BatchManifest& m)
{
    const auto path = out_dir / manifest_name;
    auto tmp = path;
    tmp += ".tmp";
    write_text_file(tmp, to_json(m).dump(2) + "\n");
    fs::rename(tmp, path);
}

} // namespace

BatchManifest run_batch(const std::vector<BenchmarkRequest>& requests, const backends::AppConfig& config,
                        const agents::Providers& providers, const BatchOptions& options)
{
    fs::create_directories(options.out_dir);
    std::optional<BatchManifest> previous;
    if (fs::exists(options.out_dir / manifest_name))
        previous = manifest_from_json(json::parse(read_text_file(options.out_dir / manifest_name)));

    BatchManifest manifest;
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto& r = requests[i];
        const ManifestEntry* old = previous ? previous->find(r.id) : nullptr;
        if (old && old->status == "success" && archive_succeeded(options.out_dir / old->archive)) {
            manifest.entries.push_back(*old);
            ++manifest.skipped;
            continue;
        }
        if (old && !old->archive.empty()) {
            // Stale or failed attempt: replace it rather than leave a duplicate.
            std::error_code ec;
            fs::remove_all(options.out_dir / old->archive, ec);
        }
        ManifestEntry pending;
        pending.id = r.id;
        pending.status = "pending";
        manifest.entries.push_back(pending);
        todo.push_back(i);
    }
    spdlog::info("batch: {} requests, {} already complete, {} to run", requests.size(), manifest.skipped, todo.size());

    std::mutex mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            if (options.cancel && options.cancel->load())
                return;
            const std::size_t k = next++;
            if (k >= todo.size())
                return;
            const auto& r = requests[todo[k]];
            ManifestEntry entry;
            entry.id = r.id;
            try {
                agents::RunOptions ro;
                ro.out_root = options.out_dir;
                auto outcome = agents::run_pipeline(to_banner_request(r), config, providers, ro);
                entry.archive = fs::relative(outcome.archive, options.out_dir).generic_string();
                entry.status = outcome.record.status;
                entry.failed_stage = outcome.record.failed_stage;
                entry.error = outcome.record.error;
                entry.cost = outcome.record.cost;
            } catch (const std::exception& e) {
                entry.status = "failed";
                entry.error = e.what();
            }
            std::lock_guard lock(mutex);
            for (auto& e : manifest.entries)
                if (e.id == entry.id)
                    e = entry;
            ++manifest.executed;
            write_manifest(options.out_dir, manifest);
        }
    };
    const int n = std::max(1, std::min<int>(options.workers, static_cast<int>(todo.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    manifest.interrupted = options.cancel && options.cancel->load() && manifest.executed < todo.size();
    for (const auto& e : manifest.entries)
        add_cost(manifest.total, e.cost);
    write_manifest(options.out_dir, manifest);
    return manifest;
}

} // namespace adcraft::bench
