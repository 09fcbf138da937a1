#include "adcraft/backends/config.hpp"

#include <fmt/format.h>

#include "adcraft/backends/http.hpp"
#include "adcraft/errors.hpp"
#include "adcraft/image.hpp"
#include "adcraft/request.hpp"

namespace adcraft::backends {

using nlohmann::json;

AppConfig default_config()
{
    AppConfig c;
    c.judge.temperature = 0.0;
    return c;
}

namespace {

void reject_credentials(const json& j, const std::string& path)
{
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            std::string lower;
            for (char ch : k)
                lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            if (lower == "api_key" || lower == "apikey" || lower == "key" || lower == "token" || lower == "secret")
                throw ConfigError(fmt::format("{}/{}: credentials must come from an environment variable "
                                              "(set api_key_env instead)",
                                              path, k));
            reject_credentials(v, path + "/" + k);
        }
    } else if (j.is_array()) {
        for (const auto& v : j)
            reject_credentials(v, path);
    }
}

RetryPolicy read_retry(const json& j, RetryPolicy r)
{
    r.max_attempts = j.value("max_attempts", r.max_attempts);
    r.backoff = std::chrono::milliseconds(j.value("backoff_ms", static_cast<long long>(r.backoff.count())));
    if (r.max_attempts < 1 || r.backoff.count() < 0)
        throw ConfigError("retry.max_attempts must be >= 1 and retry.backoff_ms >= 0");
    return r;
}

ChatConfig read_chat(const json& j, ChatConfig c)
{
    if (!j.is_object())
        throw ConfigError("chat section must be an object");
    c.provider = j.value("provider", c.provider);
    c.base_url = j.value("base_url", c.base_url);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.temperature = j.value("temperature", c.temperature);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    if (auto r = j.find("retry"); r != j.end())
        c.retry = read_retry(*r, c.retry);
    if (auto r = j.find("replies"); r != j.end())
        c.replies = r->get<std::vector<std::string>>();
    if (c.provider != "scripted" && c.provider != "openai" && c.provider != "anthropic")
        throw ConfigError("unknown chat provider \"" + c.provider + "\" (scripted, openai, anthropic)");
    if (!(c.temperature >= 0 && c.temperature <= 2))
        throw ConfigError("temperature must be within [0, 2]");
    if (c.provider != "scripted" && c.base_url.empty())
        c.base_url = c.provider == "openai" ? "https://api.openai.com/v1" : "https://api.anthropic.com/v1";
    return c;
}

SizeTable read_sizes(const json& j)
{
    SizeTable out;
    for (const auto& s : j) {
        std::optional<CanvasSize> size;
        if (s.is_string())
            size = parse_size(s.get<std::string>());
        else if (s.is_array() && s.size() == 2)
            size = CanvasSize{s[0].get<int>(), s[1].get<int>()};
        else if (s.is_object())
            size = CanvasSize{s.value("width", 0), s.value("height", 0)};
        if (!size || size->width < 1 || size->height < 1)
            throw ConfigError("invalid size entry " + s.dump());
        out.push_back(*size);
    }
    if (out.empty())
        throw ConfigError("size table is empty");
    return out;
}

T2IConfig read_t2i(const json& j, T2IConfig c)
{
    if (!j.is_object())
        throw ConfigError("t2i section must be an object");
    c.provider = j.value("provider", c.provider);
    c.base_url = j.value("base_url", c.base_url);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.negative_prompt = j.value("negative_prompt", c.negative_prompt);
    c.force_text_first_n = j.value("force_text_first_n", c.force_text_first_n);
    if (auto s = j.find("sizes"); s != j.end())
        c.sizes = read_sizes(*s);
    if (auto r = j.find("retry"); r != j.end())
        c.retry = read_retry(*r, c.retry);
    if (c.provider != "stub" && c.provider != "http")
        throw ConfigError("unknown t2i provider \"" + c.provider + "\" (stub, http)");
    return c;
}

PipelineConfig read_pipeline(const json& j, PipelineConfig p)
{
    if (!j.is_object())
        throw ConfigError("pipeline section must be an object");
    p.refine_iters = j.value("refine_iters", p.refine_iters);
    p.variations = j.value("variations", p.variations);
    p.figma = j.value("figma", p.figma);
    p.clamp = j.value("clamp", p.clamp);
    p.clamp_margin = j.value("clamp_margin", p.clamp_margin);
    p.embed_assets = j.value("embed_assets", p.embed_assets);
    p.workers = j.value("workers", p.workers);
    p.max_blueprint_repairs = j.value("max_blueprint_repairs", p.max_blueprint_repairs);
    p.max_background_attempts = j.value("max_background_attempts", p.max_background_attempts);
    p.logo_alpha_threshold = j.value("logo_alpha_threshold", p.logo_alpha_threshold);
    if (auto m = j.find("text_metrics"); m != j.end()) {
        p.metrics.advance_normal = m->value("advance_normal", p.metrics.advance_normal);
        p.metrics.advance_bold = m->value("advance_bold", p.metrics.advance_bold);
        p.metrics.advance_black = m->value("advance_black", p.metrics.advance_black);
        p.metrics.line_height = m->value("line_height", p.metrics.line_height);
    }
    if (p.refine_iters < 0 || p.variations < 0 || p.workers < 1 || p.max_blueprint_repairs < 0 ||
        p.max_background_attempts < 1 || p.clamp_margin < 0 || p.logo_alpha_threshold < 0 ||
        p.logo_alpha_threshold >= 1)
        throw ConfigError("pipeline values out of range");
    try {
        p.metrics.check();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

} // namespace

AppConfig config_from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    reject_credentials(j, "");
    AppConfig c = default_config();
    try {
        if (auto s = j.find("chat"); s != j.end())
            c.chat = read_chat(*s, c.chat);
        ChatConfig judge_base = c.chat;
        judge_base.temperature = 0.0;
        judge_base.replies.clear();
        c.judge = judge_base;
        if (auto s = j.find("judge"); s != j.end())
            c.judge = read_chat(*s, judge_base);
        if (auto s = j.find("t2i"); s != j.end())
            c.t2i = read_t2i(*s, c.t2i);
        if (auto s = j.find("rates"); s != j.end())
            c.rates = rates_from_json(*s, c.rates);
        if (auto s = j.find("rasterizer"); s != j.end()) {
            if (auto cmd = s->find("command"); cmd != s->end() && !cmd->is_null())
                c.rasterizer_command = cmd->get<std::string>();
        }
        if (auto s = j.find("pipeline"); s != j.end())
            c.pipeline = read_pipeline(*s, c.pipeline);
        c.seed = j.value("seed", c.seed);
        if (auto s = j.find("resource_dir"); s != j.end() && s->is_string())
            c.resource_dir = s->get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
    }
    return c;
}

AppConfig load_config(const std::filesystem::path& path)
{
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw ConfigError("cannot read config " + path.string() + ": " + e.what());
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    AppConfig c = config_from_json(j);
    if (c.resource_dir && c.resource_dir->is_relative())
        c.resource_dir = path.parent_path() / *c.resource_dir;
    return c;
}

std::shared_ptr<ChatProvider> make_chat_provider(const ChatConfig& cfg, std::uint64_t seed)
{
    if (cfg.provider == "scripted") {
        auto p = make_demo_chat_provider(seed);
        for (const auto& r : cfg.replies)
            p->push(r);
        return p;
    }
    HttpEndpoint ep{cfg.base_url, cfg.model, cfg.api_key_env, cfg.timeout_seconds};
    return std::make_shared<HttpChatProvider>(cfg.provider, ep);
}

std::shared_ptr<T2IProvider> make_t2i_provider(const T2IConfig& cfg)
{
    if (cfg.provider == "stub")
        return std::make_shared<StubT2IProvider>(cfg.sizes, cfg.force_text_first_n);
    HttpEndpoint ep{cfg.base_url, cfg.model, cfg.api_key_env, cfg.timeout_seconds};
    return std::make_shared<HttpT2IProvider>(ep, cfg.sizes);
}

} // namespace adcraft::backends
