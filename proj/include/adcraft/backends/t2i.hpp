#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "adcraft/backends/chat.hpp"
#include "adcraft/blueprint.hpp"
#include "adcraft/image.hpp"

namespace adcraft::backends {

using SizeTable = std::vector<CanvasSize>;

/// 1024x1024, 1024x864, 1024x768, 1344x768, 768x1344, 864x1024.
const SizeTable& default_t2i_sizes();

inline constexpr std::string_view default_negative_prompt =
    "text, letters, words, typography, captions, watermark, logo, signature, numbers, symbols";

struct T2IRequest {
    std::string prompt;
    std::string negative_prompt{default_negative_prompt};
    int width = 1024;
    int height = 1024;
    std::uint64_t seed = 0;
    std::string agent_role = "background_designer";
};

class T2IProvider {
public:
    virtual ~T2IProvider() = default;
    /// Image of exactly the requested size. Throws UnsupportedSize, ProviderFailure.
    virtual Image generate(const T2IRequest& req) = 0;
    virtual std::string name() const = 0;
    virtual const SizeTable& sizes() const = 0;
};

/// Throws UnsupportedSize unless (w, h) is in the table.
void require_supported(const SizeTable& sizes, int w, int h);

/// Procedural gradient seeded by SHA-256 of (prompt, seed). Channels stay in
/// [32, 223] so pure black never occurs naturally; forced "text" is drawn as
/// pure black glyph marks when the prompt contains FORCE_TEXT or while fewer
/// than `force_text_first_n` images have been produced.
class StubT2IProvider : public T2IProvider {
public:
    explicit StubT2IProvider(SizeTable sizes = default_t2i_sizes(), int force_text_first_n = 0);
    Image generate(const T2IRequest& req) override;
    std::string name() const override { return "stub-t2i"; }
    const SizeTable& sizes() const override { return sizes_; }

    int call_count() const { return calls_.load(); }

private:
    SizeTable sizes_;
    int force_first_n_;
    std::atomic<int> calls_{0};
};

/// Provider plus retry and usage accounting: one ledger record per
/// generated image. Exhausted retries raise ProviderFailure.
class ImageClient {
public:
    ImageClient(std::shared_ptr<T2IProvider> provider, std::shared_ptr<UsageLedger> ledger, RetryPolicy retry = {});
    Image generate(const T2IRequest& req);
    T2IProvider& provider() { return *provider_; }
    const SizeTable& sizes() const { return provider_->sizes(); }

private:
    std::shared_ptr<T2IProvider> provider_;
    std::shared_ptr<UsageLedger> ledger_;
    RetryPolicy retry_;
};

} // namespace adcraft::backends
