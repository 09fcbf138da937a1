#include "adcraft/agents/background.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <regex>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "adcraft/errors.hpp"
#include "prompts.hpp"

namespace adcraft::agents {

namespace fs = std::filesystem;

TrimResult trim_logo(const Image& logo, double alpha_threshold)
{
    if (alpha_threshold < 0 || alpha_threshold >= 1)
        throw InvalidArgument("alpha threshold must be within [0, 1)");
    const double cut = alpha_threshold * 255.0;
    int x0 = logo.width(), y0 = logo.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < logo.height(); ++y)
        for (int x = 0; x < logo.width(); ++x)
            if (logo.at(x, y).alpha > cut) {
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
    if (x1 < 0)
        throw EmptyLogo("logo has no pixel above the alpha threshold");
    PixelRect box{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
    return {crop(logo, box), box};
}

std::optional<fs::path> find_image_path(std::string_view text, const fs::path& logo, const fs::path& base_dir)
{
    static const std::regex token(R"re((?:"([^"]+)"|'([^']+)'|([^\s"'`()<>,;]+)))re");
    auto has_image_ext = [](const std::string& s) {
        auto dot = s.rfind('.');
        if (dot == std::string::npos)
            return false;
        std::string ext = s.substr(dot);
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        return std::find(std::begin(image_extensions), std::end(image_extensions), ext) != std::end(image_extensions);
    };
    auto canonical_or = [](const fs::path& p) {
        std::error_code ec;
        auto c = fs::weakly_canonical(p, ec);
        return ec ? p.lexically_normal() : c;
    };
    const fs::path logo_canon = logo.empty() ? fs::path() : canonical_or(logo);
    const std::string s(text);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), token); it != std::sregex_iterator(); ++it) {
        std::string tok = (*it)[1].matched ? (*it)[1].str() : (*it)[2].matched ? (*it)[2].str() : (*it)[3].str();
        while (!tok.empty() && std::string_view(".:!?").find(tok.back()) != std::string_view::npos &&
               !has_image_ext(tok))
            tok.pop_back();
        if (!has_image_ext(tok))
            continue;
        fs::path p(tok);
        if (p.is_relative() && !base_dir.empty())
            p = base_dir / p;
        std::error_code ec;
        if (!fs::is_regular_file(p, ec))
            continue;
        if (!logo_canon.empty() && canonical_or(p) == logo_canon)
            continue;
        return p;
    }
    return std::nullopt;
}

CanvasSize select_t2i_size(CanvasSize target, const backends::SizeTable& sizes)
{
    if (sizes.empty())
        throw InvalidArgument("T2I size table is empty");
    if (target.width <= 0 || target.height <= 0)
        throw InvalidArgument("target size must be positive");
    const double want = std::log(static_cast<double>(target.width) / target.height);
    auto better = [&](const CanvasSize& a, const CanvasSize& b) {
        double ea = std::abs(std::log(static_cast<double>(a.width) / a.height) - want);
        double eb = std::abs(std::log(static_cast<double>(b.width) / b.height) - want);
        if (ea != eb)
            return ea < eb;
        return static_cast<long long>(a.width) * a.height < static_cast<long long>(b.width) * b.height;
    };
    std::optional<CanvasSize> best_cover, best_any;
    for (const auto& s : sizes) {
        if (!best_any || better(s, *best_any))
            best_any = s;
        if (s.width >= target.width && s.height >= target.height && (!best_cover || better(s, *best_cover)))
            best_cover = s;
    }
    return best_cover ? *best_cover : *best_any;
}

PixelRect aspect_crop(int src_w, int src_h, int w, int h)
{
    if (w <= 0 || h <= 0 || src_w <= 0 || src_h <= 0)
        throw InvalidArgument("fit_image needs positive sizes");
    // Compare src_w / src_h with w / h without rounding.
    const long long lhs = static_cast<long long>(src_w) * h;
    const long long rhs = static_cast<long long>(w) * src_h;
    if (lhs == rhs)
        return {0, 0, src_w, src_h};
    if (lhs > rhs) { // source is wider: crop columns
        int cw = std::clamp(static_cast<int>(std::lround(static_cast<double>(src_h) * w / h)), 1, src_w);
        return {(src_w - cw) / 2, 0, cw, src_h};
    }
    int ch = std::clamp(static_cast<int>(std::lround(static_cast<double>(src_w) * h / w)), 1, src_h);
    return {0, (src_h - ch) / 2, src_w, ch};
}

Image fit_image(const Image& img, int w, int h)
{
    auto box = aspect_crop(img.width(), img.height(), w, h);
    Image cropped = box == PixelRect{0, 0, img.width(), img.height()} ? img : crop(img, box);
    if (cropped.width() == w && cropped.height() == h)
        return cropped;
    return resize(cropped, w, h);
}

bool checker_says_text(const std::string& reply)
{
    std::string s;
    for (char c : reply)
        if (std::isalpha(static_cast<unsigned char>(c)))
            s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else if (!s.empty())
            break;
    return s == "yes";
}

namespace {

std::string parse_description(const std::string& reply)
{
    static const std::regex label(R"((?:^|\n)\s*\**Description\**\s*:\s*([^\n]+))", std::regex::icase);
    std::smatch m;
    std::string d = std::regex_search(reply, m, label) ? m[1].str() : reply;
    auto b = d.find_first_not_of(" \t\r\n\"");
    auto e = d.find_last_not_of(" \t\r\n\"");
    return b == std::string::npos ? std::string() : d.substr(b, e - b + 1);
}

} // namespace

BackgroundResult prepare_background(const BannerRequest& req, const BannerObjectives& objectives, const Image& logo,
                                    backends::ChatClient& chat, backends::ImageClient& images,
                                    const BackgroundOptions& options)
{
    BackgroundResult out;
    auto& prov = out.provenance;
    prov.path = "background.png";

    const std::string search_text =
        req.requirement_text + (req.background_hint ? "\n" + *req.background_hint : std::string());
    if (auto found = find_image_path(search_text, req.logo, options.base_dir)) {
        Image src = [&] {
            try {
                return load_png(*found);
            } catch (const ImageError& e) {
                throw ImageError("background " + found->string() + " is not a readable PNG: " + e.what());
            }
        }();
        out.image = fit_image(src, req.width, req.height);
        prov.found_existing = true;
        prov.source_path = found->string();
        return out;
    }

    const CanvasSize gen = select_t2i_size(req.size(), images.sizes());
    prov.generated_size = gen;
    auto values = detail::objective_values(req, objectives);
    const auto logo_part = backends::ContentPart::from_image(logo);
    Image generated;
    std::string description;
    bool contains_text = true;
    const int cap = std::max(1, options.max_attempts);
    for (int attempt = 1; contains_text && attempt <= cap; ++attempt) {
        auto v = values;
        v.emplace_back("attempt", std::to_string(attempt));
        v.emplace_back("revision_note",
                       attempt == 1 ? std::string() : detail::prompt("background_revision", {{"previous", description}}));
        auto request = backends::make_request("background_designer", detail::prompt("background_designer_system"),
                                              detail::prompt("background_designer_user", v), {logo_part});
        request.temperature = chat.temperature;
        description = parse_description(chat.chat(request).text);
        if (description.empty())
            throw MalformedResponse("background designer returned an empty description");
        prov.prompt_history.push_back(description);

        backends::T2IRequest t2i;
        t2i.prompt = description;
        t2i.negative_prompt = options.negative_prompt;
        t2i.width = gen.width;
        t2i.height = gen.height;
        t2i.seed = options.seed;
        generated = images.generate(t2i);
        prov.attempts = attempt;

        auto check = backends::make_request("text_checker", detail::prompt("text_checker_system"),
                                            detail::prompt("text_checker_user"),
                                            {backends::ContentPart::from_image(generated)});
        check.temperature = 0.0;
        contains_text = checker_says_text(chat.chat(check).text);
        if (contains_text)
            spdlog::info("background attempt {} for {} contains text", attempt, req.id);
    }
    prov.description = description;
    prov.still_has_text = contains_text;
    if (contains_text)
        spdlog::warn("background for {} still contains text after {} attempts", req.id, prov.attempts);
    out.image = fit_image(generated, req.width, req.height);
    return out;
}

} // namespace adcraft::agents
