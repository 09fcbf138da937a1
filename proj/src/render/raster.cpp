#include "adcraft/render/raster.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "adcraft/errors.hpp"

namespace adcraft::render {

namespace pt = boost::property_tree;

namespace {

struct Rect {
    double x, y, w, h;
};

std::string attr(const pt::ptree& node, const char* name, const std::string& fallback = "")
{
    return node.get<std::string>(std::string("<xmlattr>.") + name, fallback);
}

double num_attr(const pt::ptree& node, const char* name, double fallback = 0.0)
{
    auto s = attr(node, name);
    if (s.empty())
        return fallback;
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        return fallback;
    }
}

std::optional<Color> paint(const std::string& s, std::optional<Color> fallback)
{
    if (s.empty())
        return fallback;
    if (s == "none" || s == "transparent")
        return std::nullopt;
    if (s == "black")
        return Color::black();
    if (s == "white")
        return Color::white();
    if (auto c = Color::parse(s))
        return c;
    return fallback;
}

Color with_opacity(Color c, double opacity)
{
    c.alpha = static_cast<std::uint8_t>(std::lround(c.alpha * std::clamp(opacity, 0.0, 1.0)));
    return c;
}

// Pixel range whose centers fall in [lo, hi).
std::pair<int, int> span(double lo, double hi, int limit)
{
    int a = static_cast<int>(std::ceil(lo - 0.5));
    int b = static_cast<int>(std::ceil(hi - 0.5));
    return {std::max(0, a), std::min(limit, b)};
}

template <class Inside>
void paint_region(Image& img, const Rect& bounds, Color c, Inside inside)
{
    auto [x0, x1] = span(bounds.x, bounds.x + bounds.w, img.width());
    auto [y0, y1] = span(bounds.y, bounds.y + bounds.h, img.height());
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            if (inside(x + 0.5, y + 0.5))
                img.blend(x, y, c);
}

void paint_rect(Image& img, const Rect& r, double rx, Color c)
{
    rx = std::min({rx, r.w / 2.0, r.h / 2.0});
    paint_region(img, r, c, [&](double px, double py) {
        if (rx <= 0.0)
            return true;
        double cx = std::clamp(px, r.x + rx, r.x + r.w - rx);
        double cy = std::clamp(py, r.y + rx, r.y + r.h - rx);
        return (px - cx) * (px - cx) + (py - cy) * (py - cy) <= rx * rx;
    });
}

void paint_ellipse(Image& img, double cx, double cy, double rx, double ry, Color c)
{
    if (rx <= 0.0 || ry <= 0.0)
        return;
    paint_region(img, {cx - rx, cy - ry, 2 * rx, 2 * ry}, c, [&](double px, double py) {
        double u = (px - cx) / rx;
        double v = (py - cy) / ry;
        return u * u + v * v <= 1.0;
    });
}

void paint_line(Image& img, double x1, double y1, double x2, double y2, double width, Color c)
{
    double half = std::max(0.5, width / 2.0);
    Rect bounds{std::min(x1, x2) - half, std::min(y1, y2) - half, std::fabs(x2 - x1) + 2 * half,
                std::fabs(y2 - y1) + 2 * half};
    double dx = x2 - x1;
    double dy = y2 - y1;
    double len2 = dx * dx + dy * dy;
    paint_region(img, bounds, c, [&](double px, double py) {
        double t = len2 > 0.0 ? std::clamp(((px - x1) * dx + (py - y1) * dy) / len2, 0.0, 1.0) : 0.0;
        double qx = x1 + t * dx - px;
        double qy = y1 + t * dy - py;
        return qx * qx + qy * qy <= half * half;
    });
}

class Painter {
public:
    Painter(Image& img, const std::filesystem::path& base, double advance) : img_(img), base_(base), advance_(advance) {}

    void children(const pt::ptree& node, double opacity)
    {
        for (const auto& [tag, child] : node) {
            if (tag == "<xmlattr>" || tag == "<xmlcomment>")
                continue;
            element(tag, child, opacity);
        }
    }

private:
    void element(const std::string& tag, const pt::ptree& node, double opacity)
    {
        double op = opacity * num_attr(node, "opacity", 1.0);
        if (tag == "g") {
            children(node, op);
        } else if (tag == "rect") {
            if (auto c = paint(attr(node, "fill"), Color::black()))
                paint_rect(img_,
                           {num_attr(node, "x"), num_attr(node, "y"), num_attr(node, "width"), num_attr(node, "height")},
                           num_attr(node, "rx"), with_opacity(*c, op));
        } else if (tag == "ellipse" || tag == "circle") {
            double rx = tag == "circle" ? num_attr(node, "r") : num_attr(node, "rx");
            double ry = tag == "circle" ? rx : num_attr(node, "ry");
            if (auto c = paint(attr(node, "fill"), Color::black()))
                paint_ellipse(img_, num_attr(node, "cx"), num_attr(node, "cy"), rx, ry, with_opacity(*c, op));
        } else if (tag == "line") {
            if (auto c = paint(attr(node, "stroke"), std::nullopt))
                paint_line(img_, num_attr(node, "x1"), num_attr(node, "y1"), num_attr(node, "x2"), num_attr(node, "y2"),
                           num_attr(node, "stroke-width", 1.0), with_opacity(*c, op));
        } else if (tag == "image") {
            image(node, op);
        } else if (tag == "text") {
            text(node, op);
        }
    }

    void image(const pt::ptree& node, double opacity)
    {
        std::string href = attr(node, "xlink:href");
        if (href.empty())
            href = attr(node, "href");
        if (href.empty())
            return;
        Image src;
        const std::string prefix = "data:image/png;base64,";
        if (href.rfind(prefix, 0) == 0)
            src = decode_png(base64_decode(std::string_view(href).substr(prefix.size())));
        else
            src = load_png(base_ / href);
        if (src.empty())
            return;

        Rect vp{num_attr(node, "x"), num_attr(node, "y"), num_attr(node, "width"), num_attr(node, "height")};
        std::string par = attr(node, "preserveAspectRatio", "xMidYMid meet");
        Rect dst = vp;
        if (par != "none") {
            double sx = vp.w / src.width();
            double sy = vp.h / src.height();
            double s = par.find("slice") != std::string::npos ? std::max(sx, sy) : std::min(sx, sy);
            dst.w = src.width() * s;
            dst.h = src.height() * s;
            dst.x = vp.x + (vp.w - dst.w) / 2.0;
            dst.y = vp.y + (vp.h - dst.h) / 2.0;
        }
        Rect clip{std::max(vp.x, dst.x), std::max(vp.y, dst.y), 0, 0};
        clip.w = std::min(vp.x + vp.w, dst.x + dst.w) - clip.x;
        clip.h = std::min(vp.y + vp.h, dst.y + dst.h) - clip.y;
        auto [x0, x1] = span(clip.x, clip.x + clip.w, img_.width());
        auto [y0, y1] = span(clip.y, clip.y + clip.h, img_.height());
        for (int y = y0; y < y1; ++y) {
            int sy = std::clamp(static_cast<int>((y + 0.5 - dst.y) / dst.h * src.height()), 0, src.height() - 1);
            for (int x = x0; x < x1; ++x) {
                int sx = std::clamp(static_cast<int>((x + 0.5 - dst.x) / dst.w * src.width()), 0, src.width() - 1);
                img_.blend(x, y, with_opacity(src.at(sx, sy), opacity));
            }
        }
    }

    void text(const pt::ptree& node, double opacity)
    {
        auto c = paint(attr(node, "fill"), Color::black());
        if (!c)
            return;
        const Color col = with_opacity(*c, opacity);
        const double fs = num_attr(node, "font-size", 16.0);
        const double ls = num_attr(node, "letter-spacing", 0.0);
        const std::string anchor = attr(node, "text-anchor", "start");
        auto bar = [&](double x, double baseline, const std::string& content) {
            std::size_t n = 0;
            for (unsigned char ch : content)
                if ((ch & 0xC0) != 0x80)
                    ++n;
            if (n == 0)
                return;
            double w = static_cast<double>(n) * (advance_ * fs + ls);
            if (anchor == "middle")
                x -= w / 2.0;
            else if (anchor == "end")
                x -= w;
            paint_rect(img_, {x, baseline - 0.7 * fs, w, 0.7 * fs}, 0.0, col);
        };
        bool had_tspan = false;
        for (const auto& [tag, child] : node) {
            if (tag != "tspan")
                continue;
            had_tspan = true;
            bar(num_attr(child, "x", num_attr(node, "x")), num_attr(child, "y", num_attr(node, "y")), child.data());
        }
        if (!had_tspan)
            bar(num_attr(node, "x"), num_attr(node, "y"), node.data());
    }

    Image& img_;
    const std::filesystem::path& base_;
    double advance_;
};

} // namespace

Image BoxCompositor::rasterize(std::string_view svg)
{
    pt::ptree doc;
    try {
        std::istringstream in{std::string(svg)};
        pt::read_xml(in, doc);
    } catch (const pt::xml_parser_error& ex) {
        throw RasterizerFailure(std::string("cannot parse SVG: ") + ex.what());
    }
    auto root = doc.get_child_optional("svg");
    if (!root)
        throw RasterizerFailure("document has no <svg> root");
    int w = static_cast<int>(std::lround(num_attr(*root, "width")));
    int h = static_cast<int>(std::lround(num_attr(*root, "height")));
    if (w <= 0 || h <= 0)
        throw RasterizerFailure("SVG root lacks a positive width/height");
    Image img(w, h, Color::white());
    try {
        Painter(img, base_dir_, glyph_advance).children(*root, 1.0);
    } catch (const ImageError& ex) {
        throw RasterizerFailure(std::string("cannot decode embedded image: ") + ex.what());
    }
    return img;
}

ExternalCommandRasterizer::ExternalCommandRasterizer(std::string command) : command_(std::move(command))
{
    if (command_.find("{in}") == std::string::npos || command_.find("{out}") == std::string::npos)
        throw ConfigError("rasterizer command must contain {in} and {out}: " + command_);
}

namespace {

std::string shell_quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

void replace_all(std::string& s, const std::string& from, const std::string& to)
{
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
}

} // namespace

Image ExternalCommandRasterizer::rasterize(std::string_view svg)
{
    static std::atomic<unsigned> counter{0};
    std::lock_guard lock(mutex_);
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / fmt::format("adcraft-raster-{}-{}", ::getpid(), counter++);
    fs::create_directories(dir);
    struct Cleanup {
        fs::path p;
        ~Cleanup()
        {
            std::error_code ec;
            fs::remove_all(p, ec);
        }
    } cleanup{dir};

    const fs::path in = dir / "in.svg";
    const fs::path out = dir / "out.png";
    const fs::path err = dir / "stderr.txt";
    write_text_file(in, svg);
    std::string cmd = command_;
    replace_all(cmd, "{in}", shell_quote(in.string()));
    replace_all(cmd, "{out}", shell_quote(out.string()));
    cmd += " 2>" + shell_quote(err.string());

    int status = std::system(cmd.c_str());
    int code = status == -1 ? -1 : (WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status));
    auto excerpt = [&] {
        std::error_code ec;
        if (!fs::exists(err, ec))
            return std::string();
        std::string text = read_text_file(err);
        if (text.size() > 400)
            text = text.substr(0, 400) + "...";
        return text;
    };
    if (code != 0)
        throw RasterizerFailure(fmt::format("rasterizer exited with {}: {}", code, excerpt()));
    if (!fs::exists(out))
        throw RasterizerFailure("rasterizer produced no output: " + excerpt());
    try {
        return load_png(out);
    } catch (const ImageError& ex) {
        throw RasterizerFailure(std::string("rasterizer output is not a PNG: ") + ex.what());
    }
}

std::unique_ptr<RasterizerInterface> make_rasterizer(const std::optional<std::string>& command,
                                                     std::filesystem::path base_dir)
{
    if (command && !command->empty())
        return std::make_unique<ExternalCommandRasterizer>(*command);
    return std::make_unique<BoxCompositor>(std::move(base_dir));
}

} // namespace adcraft::render
