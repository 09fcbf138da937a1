#include "adcraft/backends/http.hpp"

#include <cstdlib>
#include <regex>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <fmt/format.h>

#include "adcraft/errors.hpp"

namespace adcraft::backends {

using nlohmann::json;

SplitUrl split_url(const std::string& url)
{
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, re))
        throw ConfigError("invalid base URL: " + url);
    SplitUrl out{m[1].str(), m[2].str()};
    while (!out.path.empty() && out.path.back() == '/')
        out.path.pop_back();
    return out;
}

void raise_for_status(int status, const std::string& body, const std::string& who)
{
    if (status >= 200 && status < 300)
        return;
    std::string excerpt = body.substr(0, 300);
    std::string msg = fmt::format("{}: HTTP {}: {}", who, status, excerpt);
    if (status == 401 || status == 403)
        throw AuthError(msg);
    if (status == 429)
        throw TransientError(msg, true);
    if (status == 408 || status >= 500)
        throw TransientError(msg);
    throw ProviderFailure(msg);
}

namespace {

std::string credential(const HttpEndpoint& ep)
{
    if (ep.api_key_env.empty())
        return {};
    const char* v = std::getenv(ep.api_key_env.c_str());
    if (!v || !*v)
        throw AuthError("environment variable " + ep.api_key_env + " is not set");
    return v;
}

std::string post_json(const HttpEndpoint& ep, const std::string& suffix, const httplib::Headers& headers,
                      const json& body, const std::string& who)
{
    auto url = split_url(ep.base_url);
    httplib::Client cli(url.origin);
    cli.set_connection_timeout(std::min(ep.timeout_seconds, 30), 0);
    cli.set_read_timeout(ep.timeout_seconds, 0);
    cli.set_write_timeout(ep.timeout_seconds, 0);
    auto res = cli.Post(url.path + suffix, headers, body.dump(), "application/json");
    if (!res)
        throw TransientError(fmt::format("{}: transport error: {}", who, httplib::to_string(res.error())));
    raise_for_status(res->status, res->body, who);
    return res->body;
}

} // namespace

HttpChatProvider::HttpChatProvider(std::string dialect, HttpEndpoint endpoint)
    : dialect_(std::move(dialect)), endpoint_(std::move(endpoint))
{
    if (dialect_ != "openai" && dialect_ != "anthropic")
        throw ConfigError("unknown chat provider kind: " + dialect_);
    split_url(endpoint_.base_url);
    if (endpoint_.model.empty())
        throw ConfigError("chat provider " + dialect_ + " needs a model id");
}

json HttpChatProvider::build_body(const ChatRequest& req) const
{
    json messages = json::array();
    if (dialect_ == "openai" && !req.system.empty())
        messages.push_back({{"role", "system"}, {"content", req.system}});
    for (const auto& m : req.messages) {
        json parts = json::array();
        for (const auto& p : m.parts) {
            if (p.type == ContentPart::Type::text) {
                parts.push_back({{"type", "text"}, {"text", p.text}});
            } else if (dialect_ == "openai") {
                parts.push_back({{"type", "image_url"},
                                 {"image_url", {{"url", "data:" + p.media_type + ";base64," + base64_encode(p.image_bytes)}}}});
            } else {
                parts.push_back({{"type", "image"},
                                 {"source", {{"type", "base64"}, {"media_type", p.media_type}, {"data", base64_encode(p.image_bytes)}}}});
            }
        }
        messages.push_back({{"role", m.role}, {"content", parts}});
    }
    json body{{"model", endpoint_.model},
              {"messages", messages},
              {"temperature", req.temperature},
              {"max_tokens", req.max_tokens}};
    if (dialect_ == "anthropic" && !req.system.empty())
        body["system"] = req.system;
    return body;
}

ChatResponse HttpChatProvider::parse_body(const std::string& body) const
{
    try {
        json j = json::parse(body);
        ChatResponse out;
        if (dialect_ == "openai") {
            const auto& msg = j.at("choices").at(0).at("message");
            out.text = msg.at("content").get<std::string>();
            if (auto u = j.find("usage"); u != j.end()) {
                out.usage.prompt_tokens = u->value("prompt_tokens", 0LL);
                out.usage.completion_tokens = u->value("completion_tokens", 0LL);
            }
        } else {
            for (const auto& block : j.at("content"))
                if (block.value("type", "") == "text")
                    out.text += block.at("text").get<std::string>();
            if (auto u = j.find("usage"); u != j.end()) {
                out.usage.prompt_tokens = u->value("input_tokens", 0LL);
                out.usage.completion_tokens = u->value("output_tokens", 0LL);
            }
        }
        return out;
    } catch (const json::exception& e) {
        throw MalformedResponse(fmt::format("{}: cannot parse reply: {}", name(), e.what()));
    }
}

ChatResponse HttpChatProvider::complete(const ChatRequest& req)
{
    httplib::Headers headers;
    std::string key = credential(endpoint_);
    std::string suffix;
    if (dialect_ == "openai") {
        suffix = "/chat/completions";
        if (!key.empty())
            headers.emplace("Authorization", "Bearer " + key);
    } else {
        suffix = "/messages";
        headers.emplace("anthropic-version", "2023-06-01");
        if (!key.empty())
            headers.emplace("x-api-key", key);
    }
    return parse_body(post_json(endpoint_, suffix, headers, build_body(req), name()));
}

HttpT2IProvider::HttpT2IProvider(HttpEndpoint endpoint, SizeTable sizes)
    : endpoint_(std::move(endpoint)), sizes_(std::move(sizes))
{
    split_url(endpoint_.base_url);
    if (sizes_.empty())
        throw ConfigError("T2I size table is empty");
}

Image HttpT2IProvider::generate(const T2IRequest& req)
{
    require_supported(sizes_, req.width, req.height);
    httplib::Headers headers;
    if (auto key = credential(endpoint_); !key.empty())
        headers.emplace("Authorization", "Bearer " + key);
    json body{{"model", endpoint_.model},
              {"prompt", req.prompt},
              {"negative_prompt", req.negative_prompt},
              {"size", fmt::format("{}x{}", req.width, req.height)},
              {"seed", req.seed},
              {"n", 1},
              {"response_format", "b64_json"}};
    std::string reply = post_json(endpoint_, "/images/generations", headers, body, name());
    std::string b64;
    try {
        b64 = json::parse(reply).at("data").at(0).at("b64_json").get<std::string>();
    } catch (const json::exception& e) {
        throw ProviderFailure(fmt::format("{}: cannot parse reply: {}", name(), e.what()));
    }
    try {
        return decode_png(base64_decode(b64));
    } catch (const ImageError& e) {
        throw ProviderFailure(fmt::format("{}: image payload does not decode: {}", name(), e.what()));
    }
}

} // namespace adcraft::backends
