#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "adcraft/errors.hpp"
#include "adcraft/image.hpp"
#include "adcraft/run_record.hpp"

namespace adcraft::backends {

struct ContentPart {
    enum class Type { text, image };
    Type type = Type::text;
    std::string text;
    std::vector<std::uint8_t> image_bytes;
    std::string media_type; // "image/png"

    static ContentPart from_text(std::string t);
    static ContentPart from_png(std::vector<std::uint8_t> png);
    static ContentPart from_image(const Image& img);
};

struct ChatMessage {
    std::string role = "user"; // user | assistant
    std::vector<ContentPart> parts;
};

struct ChatRequest {
    std::string system;
    std::vector<ChatMessage> messages;
    double temperature = 0.3;
    int max_tokens = 4096;
    /// Agent role the call is attributed to in the usage ledger.
    std::string agent_role;

    /// Concatenated text of every message part.
    std::string user_text() const;
    std::vector<const ContentPart*> images() const;
    /// Throws InvalidArgument unless there is at least one message and the
    /// temperature is within [0, 2].
    void check() const;
};

/// Convenience: one user message with text followed by images.
ChatRequest make_request(std::string agent_role, std::string system, std::string user_text,
                         std::vector<ContentPart> images = {});

struct TokenUsage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
};

struct ChatResponse {
    std::string text;
    TokenUsage usage;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    /// Throws AuthError, TransientError (retryable), MalformedResponse.
    virtual ChatResponse complete(const ChatRequest& req) = 0;
    virtual std::string name() const = 0;
};

/// Append-only, thread-safe log of backend calls.
class UsageLedger {
public:
    void record(UsageRecord r);
    std::vector<UsageRecord> records() const;
    std::size_t size() const;
    UsageRecord totals() const;

private:
    mutable std::mutex mutex_;
    std::vector<UsageRecord> records_;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds backoff{500};
};

/// Provider plus retry and usage accounting. One successful call appends
/// exactly one ledger record.
class ChatClient {
public:
    ChatClient(std::shared_ptr<ChatProvider> provider, std::shared_ptr<UsageLedger> ledger, RetryPolicy retry = {});

    ChatResponse chat(const ChatRequest& req);

    ChatProvider& provider() { return *provider_; }
    const std::shared_ptr<UsageLedger>& ledger() const { return ledger_; }
    /// Default temperature applied to requests built by the agents.
    double temperature = 0.3;

private:
    std::shared_ptr<ChatProvider> provider_;
    std::shared_ptr<UsageLedger> ledger_;
    RetryPolicy retry_;
};

/// Deterministic offline provider. Replies come from, in order of priority:
/// a role-keyed queue, the shared queue, a role-keyed responder, the default
/// responder. With nothing left, MalformedResponse (a misconfigured test).
class ScriptedChatProvider : public ChatProvider {
public:
    using Responder = std::function<std::string(const ChatRequest&)>;

    ScriptedChatProvider() = default;
    explicit ScriptedChatProvider(std::vector<std::string> queue);

    void push(std::string reply);
    void push_for(const std::string& role, std::string reply);
    void set_responder(const std::string& role, Responder r);
    void set_default_responder(Responder r);
    /// Fixed usage for every call; otherwise ~4 characters per token.
    void set_usage(TokenUsage u) { fixed_usage_ = u; }

    ChatResponse complete(const ChatRequest& req) override;
    std::string name() const override { return "scripted"; }

    std::vector<ChatRequest> calls() const;
    std::size_t call_count() const;

private:
    mutable std::mutex mutex_;
    std::deque<std::string> queue_;
    std::map<std::string, std::deque<std::string>> role_queues_;
    std::map<std::string, Responder> responders_;
    Responder default_;
    std::optional<TokenUsage> fixed_usage_;
    std::vector<ChatRequest> calls_;
};

/// Token estimate used by the scripted provider: ceil(chars / 4), plus a flat
/// 765 per image.
TokenUsage estimate_usage(const ChatRequest& req, const std::string& reply);

/// True when the image has a pure black (0,0,0) opaque pixel. The stub T2I
/// draws forced "text" in pure black and never uses it otherwise.
bool has_glyph_marks(const Image& img);

/// A scripted provider answering every agent role deterministically, for
/// offline runs of the whole pipeline. `seed` varies copy and palette.
std::shared_ptr<ScriptedChatProvider> make_demo_chat_provider(std::uint64_t seed = 0);

} // namespace adcraft::backends
