#include "adcraft/backends/chat.hpp"

#include <cmath>
#include <thread>

#include <spdlog/spdlog.h>

namespace adcraft::backends {

ContentPart ContentPart::from_text(std::string t)
{
    ContentPart p;
    p.type = Type::text;
    p.text = std::move(t);
    return p;
}

ContentPart ContentPart::from_png(std::vector<std::uint8_t> png)
{
    ContentPart p;
    p.type = Type::image;
    p.image_bytes = std::move(png);
    p.media_type = "image/png";
    return p;
}

ContentPart ContentPart::from_image(const Image& img) { return from_png(encode_png(img)); }

std::string ChatRequest::user_text() const
{
    std::string out;
    for (const auto& m : messages)
        for (const auto& p : m.parts)
            if (p.type == ContentPart::Type::text) {
                if (!out.empty())
                    out += "\n";
                out += p.text;
            }
    return out;
}

std::vector<const ContentPart*> ChatRequest::images() const
{
    std::vector<const ContentPart*> out;
    for (const auto& m : messages)
        for (const auto& p : m.parts)
            if (p.type == ContentPart::Type::image)
                out.push_back(&p);
    return out;
}

void ChatRequest::check() const
{
    if (messages.empty())
        throw InvalidArgument("chat request needs at least one message");
    if (!(temperature >= 0.0 && temperature <= 2.0))
        throw InvalidArgument("temperature must be within [0, 2]");
    if (max_tokens < 1)
        throw InvalidArgument("max_tokens must be >= 1");
}

ChatRequest make_request(std::string agent_role, std::string system, std::string user_text,
                         std::vector<ContentPart> images)
{
    ChatRequest req;
    req.agent_role = std::move(agent_role);
    req.system = std::move(system);
    ChatMessage msg;
    msg.parts.push_back(ContentPart::from_text(std::move(user_text)));
    for (auto& img : images)
        msg.parts.push_back(std::move(img));
    req.messages.push_back(std::move(msg));
    return req;
}

void UsageLedger::record(UsageRecord r)
{
    std::lock_guard lock(mutex_);
    records_.push_back(std::move(r));
}

std::vector<UsageRecord> UsageLedger::records() const
{
    std::lock_guard lock(mutex_);
    return records_;
}

std::size_t UsageLedger::size() const
{
    std::lock_guard lock(mutex_);
    return records_.size();
}

UsageRecord UsageLedger::totals() const
{
    std::lock_guard lock(mutex_);
    UsageRecord t;
    t.agent_role = "total";
    for (const auto& r : records_) {
        t.prompt_tokens += r.prompt_tokens;
        t.completion_tokens += r.completion_tokens;
        t.images += r.images;
        t.megapixels += r.megapixels;
    }
    return t;
}

ChatClient::ChatClient(std::shared_ptr<ChatProvider> provider, std::shared_ptr<UsageLedger> ledger, RetryPolicy retry)
    : provider_(std::move(provider)), ledger_(std::move(ledger)), retry_(retry)
{
    if (!provider_)
        throw InvalidArgument("chat client needs a provider");
    if (!ledger_)
        ledger_ = std::make_shared<UsageLedger>();
    retry_.max_attempts = std::max(1, retry_.max_attempts);
}

ChatResponse ChatClient::chat(const ChatRequest& req)
{
    req.check();
    auto delay = retry_.backoff;
    for (int attempt = 1;; ++attempt) {
        try {
            ChatResponse resp = provider_->complete(req);
            if (resp.usage.prompt_tokens < 0 || resp.usage.completion_tokens < 0)
                throw MalformedResponse("negative usage counters from " + provider_->name());
            ledger_->record(UsageRecord{req.agent_role, provider_->name(), resp.usage.prompt_tokens,
                                        resp.usage.completion_tokens, 0, 0.0});
            return resp;
        } catch (const TransientError& e) {
            if (attempt >= retry_.max_attempts) {
                if (e.rate_limited())
                    throw RateLimited(provider_->name() + ": rate limited after " + std::to_string(attempt) +
                                      " attempts: " + e.what());
                throw ProviderFailure(provider_->name() + ": giving up after " + std::to_string(attempt) +
                                      " attempts: " + e.what());
            }
            spdlog::warn("{} call for {} failed ({}); retry {}/{} in {} ms", provider_->name(), req.agent_role,
                         e.what(), attempt, retry_.max_attempts - 1, delay.count());
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
    }
}

ScriptedChatProvider::ScriptedChatProvider(std::vector<std::string> queue) : queue_(queue.begin(), queue.end()) {}

void ScriptedChatProvider::push(std::string reply)
{
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(reply));
}

void ScriptedChatProvider::push_for(const std::string& role, std::string reply)
{
    std::lock_guard lock(mutex_);
    role_queues_[role].push_back(std::move(reply));
}

void ScriptedChatProvider::set_responder(const std::string& role, Responder r)
{
    std::lock_guard lock(mutex_);
    responders_[role] = std::move(r);
}

void ScriptedChatProvider::set_default_responder(Responder r)
{
    std::lock_guard lock(mutex_);
    default_ = std::move(r);
}

TokenUsage estimate_usage(const ChatRequest& req, const std::string& reply)
{
    auto tokens = [](std::size_t chars) { return static_cast<long long>((chars + 3) / 4); };
    TokenUsage u;
    u.prompt_tokens = tokens(req.system.size() + req.user_text().size()) +
                      765 * static_cast<long long>(req.images().size());
    u.completion_tokens = tokens(reply.size());
    return u;
}

ChatResponse ScriptedChatProvider::complete(const ChatRequest& req)
{
    std::optional<std::string> reply;
    Responder responder;
    std::optional<TokenUsage> usage;
    {
        std::lock_guard lock(mutex_);
        calls_.push_back(req);
        usage = fixed_usage_;
        if (auto it = role_queues_.find(req.agent_role); it != role_queues_.end() && !it->second.empty()) {
            reply = std::move(it->second.front());
            it->second.pop_front();
        } else if (!queue_.empty()) {
            reply = std::move(queue_.front());
            queue_.pop_front();
        } else if (auto r = responders_.find(req.agent_role); r != responders_.end()) {
            responder = r->second;
        } else if (default_) {
            responder = default_;
        }
    }
    if (!reply && responder)
        reply = responder(req);
    if (!reply)
        throw MalformedResponse("scripted chat provider has no reply left for role \"" + req.agent_role +
                                "\" (test misconfiguration)");
    ChatResponse resp;
    resp.text = std::move(*reply);
    resp.usage = usage ? *usage : estimate_usage(req, resp.text);
    return resp;
}

std::vector<ChatRequest> ScriptedChatProvider::calls() const
{
    std::lock_guard lock(mutex_);
    return calls_;
}

std::size_t ScriptedChatProvider::call_count() const
{
    std::lock_guard lock(mutex_);
    return calls_.size();
}

bool has_glyph_marks(const Image& img)
{
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            Color c = img.at(x, y);
            if (c.r == 0 && c.g == 0 && c.b == 0 && c.alpha == 255)
                return true;
        }
    return false;
}

} // namespace adcraft::backends
