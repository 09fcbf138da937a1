#include "adcraft/backends/t2i.hpp"

#include <algorithm>
#include <array>
#include <thread>

#include <fmt/format.h>
#include <openssl/sha.h>

#include "adcraft/errors.hpp"

namespace adcraft::backends {

const SizeTable& default_t2i_sizes()
{
    static const SizeTable sizes{{1024, 1024}, {1024, 864}, {1024, 768}, {1344, 768}, {768, 1344}, {864, 1024}};
    return sizes;
}

void require_supported(const SizeTable& sizes, int w, int h)
{
    for (const auto& s : sizes)
        if (s.width == w && s.height == h)
            return;
    throw UnsupportedSize(fmt::format("{}x{} is not in the supported T2I size table", w, h));
}

StubT2IProvider::StubT2IProvider(SizeTable sizes, int force_text_first_n)
    : sizes_(std::move(sizes)), force_first_n_(force_text_first_n)
{
    if (sizes_.empty())
        throw ConfigError("T2I size table is empty");
}

namespace {

std::array<std::uint8_t, 32> digest(const std::string& text)
{
    std::array<std::uint8_t, 32> out{};
    SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(), out.data());
    return out;
}

std::uint8_t channel(std::uint8_t b) { return static_cast<std::uint8_t>(32 + b % 192); }

// Rows of thick black bars, like lines of large lettering across the middle.
void draw_glyph_marks(Image& img, const std::array<std::uint8_t, 32>& h)
{
    const int glyph = std::max(12, img.height() / 14);
    const int stroke = std::max(4, glyph / 3);
    const int rows = 2;
    int y = img.height() / 2 - rows * glyph;
    for (int r = 0; r < rows; ++r, y += glyph * 3 / 2) {
        int x = img.width() / 6;
        for (int g = 0; x + glyph < img.width() * 5 / 6; ++g) {
            std::uint8_t bits = h[static_cast<std::size_t>(g + r * 7) % h.size()];
            img.fill_rect(x, y, stroke, glyph, Color::black());                          // stem
            if (bits & 1)
                img.fill_rect(x, y, glyph * 2 / 3, stroke, Color::black());              // top bar
            if (bits & 2)
                img.fill_rect(x, y + glyph / 2 - stroke / 2, glyph * 2 / 3, stroke, Color::black());
            if (bits & 4)
                img.fill_rect(x, y + glyph - stroke, glyph * 2 / 3, stroke, Color::black());
            x += glyph;
            if (bits & 8)
                x += glyph / 2; // word gap
        }
    }
}

} // namespace

Image StubT2IProvider::generate(const T2IRequest& req)
{
    require_supported(sizes_, req.width, req.height);
    const int index = calls_++;
    auto h = digest(req.prompt + '\0' + std::to_string(req.seed));
    const Color a = Color::rgb(channel(h[0]), channel(h[1]), channel(h[2]));
    const Color b = Color::rgb(channel(h[3]), channel(h[4]), channel(h[5]));
    const double gx = (h[6] % 5) / 4.0; // gradient direction weights
    const double gy = 1.0 - gx;

    Image img(req.width, req.height);
    for (int y = 0; y < req.height; ++y) {
        for (int x = 0; x < req.width; ++x) {
            double t = gx * x / std::max(1, req.width - 1) + gy * y / std::max(1, req.height - 1);
            auto mix = [t](std::uint8_t p, std::uint8_t q) {
                return static_cast<std::uint8_t>(p + (q - p) * t + 0.5);
            };
            img.set(x, y, Color::rgb(mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)));
        }
    }
    if (req.prompt.find("FORCE_TEXT") != std::string::npos || index < force_first_n_)
        draw_glyph_marks(img, h);
    return img;
}

ImageClient::ImageClient(std::shared_ptr<T2IProvider> provider, std::shared_ptr<UsageLedger> ledger, RetryPolicy retry)
    : provider_(std::move(provider)), ledger_(std::move(ledger)), retry_(retry)
{
    if (!provider_)
        throw InvalidArgument("image client needs a provider");
    if (!ledger_)
        ledger_ = std::make_shared<UsageLedger>();
}

Image ImageClient::generate(const T2IRequest& req)
{
    Image img;
    auto delay = retry_.backoff;
    for (int attempt = 1;; ++attempt) {
        try {
            img = provider_->generate(req);
            break;
        } catch (const TransientError& e) {
            if (attempt >= std::max(1, retry_.max_attempts))
                throw ProviderFailure(fmt::format("{}: giving up after {} attempts: {}", provider_->name(), attempt,
                                                  e.what()));
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
    }
    if (img.width() != req.width || img.height() != req.height)
        img = resize(img, req.width, req.height);
    ledger_->record(UsageRecord{req.agent_role, provider_->name(), 0, 0, 1,
                                static_cast<double>(req.width) * req.height / 1e6});
    return img;
}

} // namespace adcraft::backends
