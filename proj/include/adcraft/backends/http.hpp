#pragma once

#include <memory>
#include <string>

#include "adcraft/backends/chat.hpp"
#include "adcraft/backends/t2i.hpp"

namespace adcraft::backends {

struct HttpEndpoint {
    /// e.g. "https://api.openai.com/v1"; the path prefix is kept.
    std::string base_url;
    std::string model;
    /// Environment variable holding the credential; empty means no auth header.
    std::string api_key_env;
    int timeout_seconds = 120;
};

/// "openai": chat-completions shape with image_url parts.
/// "anthropic": messages shape with base64 image blocks.
class HttpChatProvider : public ChatProvider {
public:
    HttpChatProvider(std::string dialect, HttpEndpoint endpoint);
    ChatResponse complete(const ChatRequest& req) override;
    std::string name() const override { return dialect_ + ":" + endpoint_.model; }

    /// Request body as sent on the wire (exposed for tests).
    nlohmann::json build_body(const ChatRequest& req) const;
    ChatResponse parse_body(const std::string& body) const;

private:
    std::string dialect_;
    HttpEndpoint endpoint_;
};

/// Images-generation endpoint returning base64 PNG ("b64_json").
class HttpT2IProvider : public T2IProvider {
public:
    HttpT2IProvider(HttpEndpoint endpoint, SizeTable sizes);
    Image generate(const T2IRequest& req) override;
    std::string name() const override { return "http:" + endpoint_.model; }
    const SizeTable& sizes() const override { return sizes_; }

private:
    HttpEndpoint endpoint_;
    SizeTable sizes_;
};

struct SplitUrl {
    std::string origin; // scheme://host[:port]
    std::string path;   // without trailing '/'
};
/// Throws ConfigError for anything that is not http(s)://host[:port][/path].
SplitUrl split_url(const std::string& url);

/// Raises the error matching an HTTP status (401/403 auth, 429 rate limit,
/// 408/5xx transient, other non-2xx provider failure).
void raise_for_status(int status, const std::string& body, const std::string& who);

} // namespace adcraft::backends
