#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "adcraft/backends/chat.hpp"
#include "adcraft/backends/demo.hpp"
#include "adcraft/blueprint_io.hpp"
#include "adcraft/layout/diagnostics.hpp"
#include "adcraft/layout/text_metrics.hpp"

namespace adcraft::backends {

namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s)
{
    for (auto& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

std::string join_first(const std::vector<std::string>& w, std::size_t n)
{
    std::string out;
    for (std::size_t i = 0; i < std::min(n, w.size()); ++i)
        out += (i ? " " : "") + w[i];
    return out;
}

std::string capitalize_words(std::string s)
{
    bool start = true;
    for (auto& c : s) {
        if (start && std::islower(static_cast<unsigned char>(c)))
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        start = c == ' ';
    }
    return s;
}

std::string strip_punct(std::string s)
{
    while (!s.empty() && std::strchr(".,;:!?", s.back()))
        s.pop_back();
    return s;
}

std::uint64_t mix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

const std::array<Color, 6> cta_palette{Color::rgb(0xE4, 0x57, 0x2E), Color::rgb(0x2E, 0x86, 0xAB),
                                       Color::rgb(0x4A, 0x2E, 0x2B), Color::rgb(0x3B, 0xB2, 0x73),
                                       Color::rgb(0x77, 0x68, 0xAE), Color::rgb(0xD9, 0x8C, 0x1F)};

const std::array<const char*, 4> moods{"energetic and optimistic", "calm and trustworthy", "playful and warm",
                                       "premium and confident"};

int int_after(std::string_view text, std::string_view label, int fallback)
{
    auto v = labeled_value(text, label);
    try {
        return v.empty() ? fallback : std::stoi(v);
    } catch (const std::exception&) {
        return fallback;
    }
}

std::optional<CanvasSize> size_after(std::string_view text, std::string_view label)
{
    auto v = labeled_value(text, label);
    auto sp = v.find(' ');
    return parse_size(sp == std::string::npos ? v : v.substr(0, sp));
}

Element make_text(std::string id, std::string text, TextRole role, double font, FontWeight weight, Color fill,
                  TextAlign align, double max_width)
{
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::text;
    e.content = TextContent{std::move(text), role};
    e.style.font_family = role == TextRole::headline ? "Montserrat" : "Open Sans";
    e.style.font_size = font;
    e.style.font_weight = weight;
    e.style.fill = fill;
    e.style.text_align = align;
    IntrinsicSize s;
    s.max_width = max_width;
    e.size = s;
    return e;
}

RelativePosition rel(std::string ref, NinePoint ra, NinePoint sa, double dx, double dy)
{
    return RelativePosition{std::move(ref), ra, sa, Offset{dx, dy}};
}

} // namespace

std::string labeled_value(std::string_view text, std::string_view label)
{
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        auto line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        auto t = trim(line);
        if (t.size() >= label.size() && lower(t.substr(0, label.size())) == lower(std::string(label)))
            return trim(std::string_view(t).substr(label.size()));
        if (end == std::string_view::npos)
            break;
        pos = end + 1;
    }
    return {};
}

DemoCopy demo_copy(const BannerObjectives& objectives)
{
    DemoCopy c;
    auto pw = words(strip_punct(objectives.primary_purpose));
    c.headline = pw.empty() ? "Discover More" : capitalize_words(join_first(pw, 4));
    auto aw = words(strip_punct(objectives.target_audience));
    c.subline = aw.empty() ? "Made for you" : "Made for " + join_first(aw, 5);
    const auto p = lower(objectives.primary_purpose);
    if (p.find("download") != std::string::npos || p.find("app") != std::string::npos)
        c.cta = "Download Now";
    else if (p.find("book") != std::string::npos || p.find("appointment") != std::string::npos)
        c.cta = "Book Now";
    else if (p.find("join") != std::string::npos || p.find("sign") != std::string::npos ||
             p.find("member") != std::string::npos)
        c.cta = "Join Today";
    else if (p.find("sale") != std::string::npos || p.find("shop") != std::string::npos ||
             p.find("offer") != std::string::npos || p.find("discount") != std::string::npos)
        c.cta = "Shop Now";
    else
        c.cta = "Learn More";
    return c;
}

Blueprint demo_blueprint(const DemoDesignParams& params, const DemoCopy& copy)
{
    const double W = params.canvas.width;
    const double H = params.canvas.height;
    if (W < 1 || H < 1)
        throw InvalidArgument("demo blueprint needs a positive canvas");
    const layout::TextMetricsTable metrics;
    const double logo_aspect = params.logo_width > 0 && params.logo_height > 0
                                   ? static_cast<double>(params.logo_width) / params.logo_height
                                   : 1.0;
    const bool dark_bg = layout::relative_luminance(params.background_mean) < 0.35;
    const Color ink = dark_bg ? Color::rgb(0xFF, 0xFF, 0xFF) : Color::rgb(0x1A, 0x1A, 0x1A);
    const Color panel = dark_bg ? Color{0, 0, 0, 0x73} : Color{0xFF, 0xFF, 0xFF, 0xA6};
    const Color cta_fill =
        cta_palette[(mix(params.seed) + static_cast<std::uint64_t>(params.variation + params.iteration)) %
                    cta_palette.size()];
    const double radius = 4 + 4 * (params.iteration % 3);
    const double refine_scale = 1.0 - 0.04 * std::min(params.iteration, 3);

    Blueprint bp;
    bp.canvas = params.canvas;

    auto logo = [&](NinePoint ra, NinePoint sa, double dx, double dy, double h) {
        Element e;
        e.id = "logo";
        e.kind = ElementKind::logo;
        e.content = AssetContent{"logo"};
        e.position = rel(std::string(canvas_ref), ra, sa, dx, dy);
        IntrinsicSize s;
        s.target_height = h;
        e.size = s;
        return e;
    };
    auto cta = [&](NinePoint ra, NinePoint sa, double dx, double dy, double font) {
        Element e;
        e.id = "cta";
        e.kind = ElementKind::cta_button;
        e.content = TextContent{copy.cta, TextRole::cta};
        e.style.font_family = "Open Sans";
        e.style.font_size = font;
        e.style.font_weight = FontWeight::bold;
        e.style.fill = cta_fill;
        e.style.corner_radius = radius;
        e.style.padding = std::round(font * 0.5);
        e.position = rel(std::string(canvas_ref), ra, sa, dx, dy);
        e.size = IntrinsicSize{};
        return e;
    };

    if (W / H >= 3.0) {
        // Single row: logo, headline (and subline when tall enough), CTA.
        const double m = std::max(4.0, std::round(0.12 * H));
        double logo_h = std::round(std::min(H * 0.55, W * 0.22 / logo_aspect));
        const double logo_w = std::round(logo_h * logo_aspect);
        double fc = std::clamp(std::round(H * 0.2), 9.0, 20.0);
        Style cs;
        cs.font_size = fc;
        cs.font_weight = FontWeight::bold;
        double cta_w = layout::measure_text(copy.cta, cs, metrics).width + 2 * std::round(fc * 0.5);
        while (cta_w > W * 0.3 && fc > 6) {
            fc -= 1;
            cs.font_size = fc;
            cta_w = layout::measure_text(copy.cta, cs, metrics).width + 2 * std::round(fc * 0.5);
        }
        const bool with_sub = H >= 80;
        const double avail_w = std::max(20.0, W - (m + logo_w + 2 * m) - (cta_w + 2 * m));
        double fh = std::round(std::min(48.0, H * (with_sub ? 0.32 : 0.42)) * refine_scale);
        double fs = std::max(8.0, std::round(fh * 0.5));
        for (int guard = 0; guard < 60 && fh > 6; ++guard) {
            Style hs;
            hs.font_size = fh;
            hs.font_weight = FontWeight::black;
            auto hm = layout::measure_text(copy.headline, hs, metrics);
            double total_h = hm.height;
            double width = hm.width;
            if (with_sub) {
                Style ss;
                ss.font_size = fs;
                auto sm = layout::measure_text(copy.subline, ss, metrics);
                total_h += sm.height + 4;
                width = std::max(width, sm.width);
            }
            if (width <= avail_w && total_h <= H - 2 * m)
                break;
            fh -= 1;
            fs = std::max(6.0, std::round(fh * 0.5));
        }
        bp.layout_pattern = "Left-Content";
        bp.rationale = "Single row for a wide format: brand mark, message, then the action at the reading end.";
        bp.elements.push_back(logo(NinePoint::center_left, NinePoint::center_left, m, 0, logo_h));
        auto head = make_text("headline", copy.headline, TextRole::headline, fh, FontWeight::black, ink,
                              TextAlign::left, avail_w);
        head.position = rel("logo", NinePoint::center_right, with_sub ? NinePoint::bottom_left : NinePoint::center_left,
                            2 * m, with_sub ? 2.0 : 0.0);
        bp.elements.push_back(head);
        if (with_sub) {
            auto sub = make_text("subline", copy.subline, TextRole::subheadline, fs, FontWeight::normal, ink,
                                 TextAlign::left, avail_w);
            sub.position = rel("headline", NinePoint::bottom_left, NinePoint::top_left, 0, 4);
            bp.elements.push_back(sub);
        }
        bp.elements.push_back(cta(NinePoint::center_right, NinePoint::center_right, -m, 0, fc));
        return bp;
    }

    // Vertical stack; centered for tall formats and odd variations.
    const bool centered = W / H <= 0.5 || params.variation % 2 == 1;
    const double m = std::max(8.0, std::round(0.06 * std::min(W, H)));
    const double text_w = W - 2 * m;
    double scale = refine_scale;
    double fh = 0, fs = 0, fc = 0, logo_h = 0, gap = 0;
    double head_h = 0, sub_h = 0, head_w = 0, sub_w = 0;
    for (int guard = 0; guard < 80; ++guard, scale *= 0.93) {
        fh = std::round(std::clamp(0.16 * std::min(W, H), 14.0, 48.0) * scale);
        fs = std::max(9.0, std::round(fh * 0.5));
        fc = std::max(9.0, std::round(std::min(22.0, fh * 0.5)));
        logo_h = std::max(8.0, std::round(std::min(H * 0.14 * scale, W * 0.5 / logo_aspect)));
        gap = std::max(4.0, std::round(m * 0.8 * scale));
        Style hs;
        hs.font_size = fh;
        hs.font_weight = FontWeight::black;
        auto hm = layout::measure_text(copy.headline, hs, metrics, text_w);
        Style ss;
        ss.font_size = fs;
        auto sm = layout::measure_text(copy.subline, ss, metrics, text_w);
        Style cs;
        cs.font_size = fc;
        cs.font_weight = FontWeight::bold;
        auto cm = layout::measure_text(copy.cta, cs, metrics, text_w - 2 * std::round(fc * 0.5));
        head_h = hm.height;
        head_w = hm.width;
        sub_h = sm.height;
        sub_w = sm.width;
        double cta_h = cm.height + 2 * std::round(fc * 0.5);
        double total = 2 * m + logo_h + head_h + sub_h + cta_h + 3 * gap;
        if (total <= H || fh <= 8)
            break;
    }
    const NinePoint top = centered ? NinePoint::top_center : NinePoint::top_left;
    const NinePoint bottom = centered ? NinePoint::bottom_center : NinePoint::bottom_left;
    const TextAlign align = centered ? TextAlign::center : TextAlign::left;
    const double edge = centered ? 0 : m;

    bp.layout_pattern = centered ? "Centered" : "Top-Down";
    bp.rationale = centered ? "Centered stack: brand mark on top, message in the middle, action at the bottom."
                            : "Left-aligned stack with decreasing type sizes and the action at the bottom.";

    // Translucent panel behind the message keeps it readable on busy backgrounds.
    const double pad = std::round(gap / 2);
    const double panel_w = std::round(std::min(W - 2 * std::max(0.0, m - pad), std::max(head_w, sub_w) + 2 * pad));
    Element p;
    p.id = "panel";
    p.kind = ElementKind::shape;
    p.content = ShapeContent{};
    p.style.fill = panel;
    p.style.corner_radius = std::round(pad);
    p.position = rel("headline", top, top, 0, -pad);
    p.size = ExplicitSize{panel_w, std::round(head_h + gap + sub_h + 2 * pad)};
    if (!centered)
        p.position = rel("headline", NinePoint::top_left, NinePoint::top_left, -pad, -pad);
    bp.elements.push_back(p);

    bp.elements.push_back(logo(top, top, edge, m, logo_h));
    auto head = make_text("headline", copy.headline, TextRole::headline, fh, FontWeight::black, ink, align, text_w);
    head.position = rel("logo", bottom, top, 0, gap);
    if (!centered)
        head.position = rel("logo", NinePoint::bottom_left, NinePoint::top_left, 0, gap);
    bp.elements.push_back(head);
    auto sub = make_text("subline", copy.subline, TextRole::subheadline, fs, FontWeight::normal, ink, align, text_w);
    sub.position = rel("headline", bottom, top, 0, gap);
    bp.elements.push_back(sub);
    bp.elements.push_back(cta(bottom, bottom, edge, -m, fc));
    return bp;
}

std::shared_ptr<ScriptedChatProvider> make_demo_chat_provider(std::uint64_t seed)
{
    auto p = std::make_shared<ScriptedChatProvider>();

    p->set_responder("strategist", [seed](const ChatRequest& req) {
        auto text = req.user_text();
        auto input = labeled_value(text, "User requirements:");
        auto lw = lower(input);
        std::string audience = "everyday customers";
        if (auto pos = lw.find(" for "); pos != std::string::npos) {
            auto rest = words(strip_punct(input.substr(pos + 5)));
            auto cut = std::find_if(rest.begin(), rest.end(), [](const std::string& w) {
                return w.back() == ',' || w.back() == '.' || w.back() == ';';
            });
            std::size_t n = std::min<std::size_t>(5, cut == rest.end() ? rest.size() : (cut - rest.begin()) + 1);
            if (n > 0)
                audience = strip_punct(join_first(rest, n));
        }
        auto head = input.substr(0, std::min(input.size(), lw.find(" for ")));
        auto iw = words(strip_punct(head));
        std::string purpose = iw.empty() ? "raise brand awareness" : strip_punct(join_first(iw, 6));
        return fmt::format("Purpose: {}\nAudience: {}\nMood: {}", purpose, audience,
                           moods[mix(seed ^ std::hash<std::string>{}(input)) % moods.size()]);
    });

    p->set_responder("background_designer", [](const ChatRequest& req) {
        auto text = req.user_text();
        auto mood = labeled_value(text, "- Mood and Tone:");
        auto attempt = int_after(text, "Attempt:", 1);
        std::string d = fmt::format("A {} abstract scene of soft layered gradients, gentle curves and diffuse light, "
                                    "open negative space on one side, smooth color transitions",
                                    mood.empty() ? "bright" : lower(mood));
        if (attempt > 1)
            d += ", plain untextured surfaces, no signage, no printed matter, no symbols";
        return "Description: " + d;
    });

    p->set_responder("text_checker", [](const ChatRequest& req) {
        for (const auto* part : req.images())
            if (has_glyph_marks(decode_png(part->image_bytes)))
                return std::string("yes");
        return std::string("no");
    });

    p->set_responder("foreground_designer", [seed](const ChatRequest& req) {
        auto text = req.user_text();
        DemoDesignParams params;
        params.canvas = size_after(text, "Canvas:").value_or(CanvasSize{300, 250});
        if (auto logo = size_after(text, "Logo size:")) {
            params.logo_width = logo->width;
            params.logo_height = logo->height;
        }
        params.iteration = int_after(text, "Current iteration:", 0);
        params.variation = int_after(text, "Prior variations:", 0);
        params.seed = seed;
        auto images = req.images();
        if (!images.empty()) {
            auto img = decode_png(images.front()->image_bytes);
            params.background_mean = mean_color(img, PixelRect{0, 0, img.width(), img.height()});
        }
        BannerObjectives obj{labeled_value(text, "- Primary Purpose:"), labeled_value(text, "- Target Audience:"),
                             labeled_value(text, "- Mood and Tone:")};
        return "```json\n" + serialize_blueprint(demo_blueprint(params, demo_copy(obj))) + "\n```";
    });

    p->set_responder("reviewer", [](const ChatRequest& req) {
        auto t = int_after(req.user_text(), "Current iteration:", 0);
        if (t == 0)
            return std::string("FEEDBACK:\n1. The call-to-action button could use a stronger color against the "
                               "background.\n2. Give the headline slightly more breathing room.\n"
                               "VERDICT: REVISE");
        return std::string("FEEDBACK:\nThe earlier points are addressed; hierarchy and contrast read well.\n"
                           "VERDICT: PRODUCTION_READY");
    });

    p->set_responder("compare_conclude", [](const ChatRequest& req) {
        auto text = req.user_text();
        static const std::regex entry(R"(^- (\w+) (\S+))", std::regex::multiline);
        std::vector<std::string> items;
        for (auto it = std::sregex_iterator(text.begin(), text.end(), entry); it != std::sregex_iterator(); ++it)
            items.push_back((*it)[2].str() + " " + (*it)[1].str());
        if (items.empty())
            return std::string("No visible modifications.");
        std::string out = "Modifications: ";
        for (std::size_t i = 0; i < items.size(); ++i)
            out += (i ? "; " : "") + items[i];
        return out + ".";
    });

    p->set_responder("judge", [seed](const ChatRequest& req) {
        auto text = req.user_text();
        if (text.find("CHOICE:") != std::string::npos)
            return std::string("Banner A presents the offer more clearly.\nCHOICE: A");
        int score = 3 + static_cast<int>(mix(seed ^ std::hash<std::string>{}(text)) % 3);
        return fmt::format("The banner meets most of the criteria.\nSCORE: {}", score);
    });

    return p;
}

} // namespace adcraft::backends
