#include <doctest.h>

#include <cstdlib>
#include <random>


#include "adcraft/errors.hpp"
#include "adcraft/layout/resolve.hpp"
#include "adcraft/render/figma.hpp"
#include "adcraft/render/raster.hpp"
#include "adcraft/render/svg.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/svg_probe.hpp"

using namespace adcraft;
using namespace adcraft::render;
using fixtures::element_nodes;
using fixtures::parse_svg;
using fixtures::count_tag;
namespace pt = boost::property_tree;

namespace {

AssetStore fixture_assets(CanvasSize canvas)
{
    AssetStore s;
    s.add("background", fixtures::gradient_image(canvas.width, canvas.height), "background.png");
    s.add("logo", fixtures::logo_image(), "logo_trimmed.png");
    return s;
}

struct Rendered {
    Blueprint bp;
    layout::ResolvedLayout layout;
    AssetStore assets;
};

Rendered six()
{
    Rendered r;
    r.bp = fixtures::six_element_fixture();
    r.assets = fixture_assets(r.bp.canvas);
    r.layout = layout::resolve_layout(r.bp, layout::TextMetricsTable{}, r.assets.sizes());
    return r;
}

} // namespace

TEST_SUITE("render")
{
    TEST_CASE("background-only banner has one image node")
    {
        Blueprint bp;
        bp.canvas = {728, 90};
        auto assets = fixture_assets(bp.canvas);
        auto svg = emit_svg(layout::resolve_layout(bp, {}), bp, assets);
        auto doc = parse_svg(svg);
        CHECK(doc.get<int>("svg.<xmlattr>.width") == 728);
        CHECK(doc.get<int>("svg.<xmlattr>.height") == 90);
        CHECK(count_tag(doc, "image") == 1);
        CHECK(doc.get<std::string>("svg.image.<xmlattr>.data-role") == "background");
        CHECK(doc.get<std::string>("svg.image.<xmlattr>.xlink:href").rfind("data:image/png;base64,", 0) == 0);
    }

    TEST_CASE("cta button is a rounded rect with a centered label")
    {
        Blueprint bp;
        bp.canvas = {300, 250};
        bp.elements.push_back(fixtures::cta_el("cta", "Shop Now", AbsolutePosition{90, 180}, Color::parse("#4A2E2B").value(), 8));
        auto assets = fixture_assets(bp.canvas);
        auto l = layout::resolve_layout(bp, {});
        auto doc = parse_svg(emit_svg(l, bp, assets));
        auto nodes = element_nodes(doc);
        REQUIRE(nodes.size() == 1);
        const auto& g = *nodes[0].second;
        CHECK(nodes[0].first == "cta");
        CHECK(g.get<std::string>("rect.<xmlattr>.rx") == "8");
        CHECK(g.get<std::string>("rect.<xmlattr>.fill") == "#4A2E2B");
        CHECK(g.get<std::string>("text") == "Shop Now");
        CHECK(g.get<std::string>("text.<xmlattr>.fill") == "#FFFFFF");
        CHECK(g.get<std::string>("text.<xmlattr>.text-anchor") == "middle");
        const auto& box = l.boxes[0];
        CHECK(g.get<double>("text.<xmlattr>.x") == box.x + box.width / 2);
    }

    TEST_CASE("six-element fixture matches the golden file")
    {
        auto r = six();
        auto svg = emit_svg(r.layout, r.bp, r.assets);
        CHECK(emit_svg(r.layout, r.bp, r.assets) == svg);
        auto golden = fixtures::data_dir() / "golden" / "six_element.svg";
        if (const char* update = std::getenv("ADCRAFT_UPDATE_GOLDEN"); update && *update == '1')
            write_text_file(golden, svg);
        REQUIRE_MESSAGE(std::filesystem::exists(golden), "golden file missing; set ADCRAFT_UPDATE_GOLDEN=1");
        CHECK(read_text_file(golden) == svg);
    }

    TEST_CASE("element count and geometry fidelity")
    {
        auto r = six();
        auto doc = parse_svg(emit_svg(r.layout, r.bp, r.assets));
        auto nodes = element_nodes(doc);
        REQUIRE(nodes.size() == r.bp.elements.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto& [id, node] = nodes[i];
            CHECK(id == r.bp.elements[i].id);
            const auto* box = r.layout.find(id);
            CHECK(node->get<double>("<xmlattr>.data-x") == box->x);
            CHECK(node->get<double>("<xmlattr>.data-y") == box->y);
            CHECK(node->get<double>("<xmlattr>.data-width") == box->width);
            CHECK(node->get<double>("<xmlattr>.data-height") == box->height);
            if (auto w = node->get_optional<double>("<xmlattr>.width")) {
                CHECK(*w == box->width);
                CHECK(node->get<double>("<xmlattr>.x") == box->x);
            }
        }
    }

    TEST_CASE("element count and geometry hold on random blueprints")
    {
        std::mt19937 rng(909);
        for (int iter = 0; iter < 200; ++iter) {
            auto bp = fixtures::random_valid_blueprint(rng);
            auto assets = fixture_assets(bp.canvas);
            auto lay = layout::resolve_layout(bp, layout::TextMetricsTable{}, assets.sizes());
            auto doc = parse_svg(emit_svg(lay, bp, assets));
            auto nodes = element_nodes(doc);
            REQUIRE(nodes.size() == bp.elements.size());
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                const auto* box = lay.find(nodes[i].first);
                REQUIRE(box);
                CHECK(nodes[i].first == bp.elements[i].id);
                CHECK(nodes[i].second->get<double>("<xmlattr>.data-x") == box->x);
                CHECK(nodes[i].second->get<double>("<xmlattr>.data-y") == box->y);
                CHECK(nodes[i].second->get<double>("<xmlattr>.data-width") == box->width);
                CHECK(nodes[i].second->get<double>("<xmlattr>.data-height") == box->height);
            }
        }
    }

    TEST_CASE("removing any element node leaves a valid svg without it")
    {
        auto r = six();
        auto svg = emit_svg(r.layout, r.bp, r.assets);
        for (const auto& e : r.bp.elements) {
            auto doc = parse_svg(svg);
            auto& root = doc.get_child("svg");
            for (auto it = root.begin(); it != root.end(); ++it) {
                if (it->second.get<std::string>("<xmlattr>.id", "") == e.id) {
                    root.erase(it);
                    break;
                }
            }
            std::ostringstream out;
            pt::write_xml(out, doc);
            auto again = parse_svg(out.str());
            auto nodes = element_nodes(again);
            CHECK(nodes.size() == r.bp.elements.size() - 1);
            for (auto& n : nodes)
                CHECK(n.first != e.id);
            CHECK(BoxCompositor().rasterize(out.str()).width() == 300);
        }
    }

    TEST_CASE("missing assets")
    {
        auto r = six();
        AssetStore none;
        CHECK_THROWS_AS(emit_svg(r.layout, r.bp, none), MissingAsset);
        AssetStore bg_only;
        bg_only.add("background", fixtures::gradient_image(10, 10), "bg.png");
        CHECK_THROWS_AS(emit_svg(r.layout, r.bp, bg_only), MissingAsset);
    }

    TEST_CASE("href mode references filenames")
    {
        auto r = six();
        SvgOptions opt;
        opt.embed_assets = false;
        auto svg = emit_svg(r.layout, r.bp, r.assets, opt);
        CHECK(svg.find(R"(xlink:href="background.png")") != std::string::npos);
        CHECK(svg.find(R"(xlink:href="logo_trimmed.png")") != std::string::npos);
        CHECK(svg.find("base64") == std::string::npos);
    }

    TEST_CASE("number formatting is shortest round trip")
    {
        CHECK(format_number(0) == "0");
        CHECK(format_number(-0.0) == "0");
        CHECK(format_number(12) == "12");
        CHECK(format_number(12.5) == "12.5");
        CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
        CHECK(xml_escape("a<b & \"c\"") == "a&lt;b &amp; &quot;c&quot;");
    }

    TEST_CASE("figma plugin: zero and three elements")
    {
        auto tmpl = default_figma_template();
        Blueprint bp;
        bp.canvas = {300, 250};
        auto assets = fixture_assets(bp.canvas);
        auto plugin = emit_figma_plugin(layout::resolve_layout(bp, {}), bp, assets, tmpl);
        auto s = validate_figma_code(plugin.code);
        CHECK(s.has_required_functions);
        CHECK(s.background_calls == 1);
        CHECK(s.element_calls == 0);
        CHECK(plugin.code.find("{{") == std::string::npos);
        CHECK(plugin.code.find(R"(const imageList = ["background.png"];)") != std::string::npos);

        auto r = six();
        r.bp.elements.resize(3);
        r.layout = layout::resolve_layout(r.bp, {}, r.assets.sizes());
        plugin = emit_figma_plugin(r.layout, r.bp, r.assets, tmpl);
        s = validate_figma_code(plugin.code);
        CHECK(s.element_calls == 3);
        CHECK(s.ids == std::vector<std::string>{"panel", "logo", "headline"});
        CHECK(plugin.image_list == std::vector<std::string>{"background.png", "logo_trimmed.png"});
        CHECK(plugin.manifest["main"] == "code.js");
        CHECK(plugin.code.find("createBackground(frame") < plugin.code.find("createShape(frame"));
        CHECK(emit_figma_plugin(r.layout, r.bp, r.assets, tmpl).code == plugin.code);
    }

    TEST_CASE("figma plugin: call count equals element count")
    {
        auto r = six();
        auto plugin = emit_figma_plugin(r.layout, r.bp, r.assets, default_figma_template());
        auto s = validate_figma_code(plugin.code);
        CHECK(s.element_calls == static_cast<int>(r.bp.elements.size()));
        std::vector<std::string> ids;
        for (const auto& e : r.bp.elements)
            ids.push_back(e.id);
        CHECK(s.ids == ids);
    }

    TEST_CASE("figma plugin: bad templates")
    {
        auto r = six();
        auto tmpl = default_figma_template();
        auto no_list = tmpl;
        no_list.replace(no_list.find("{{IMAGE_LIST}}"), 14, "[]");
        CHECK_THROWS_AS(emit_figma_plugin(r.layout, r.bp, r.assets, no_list), BadTemplate);
        auto no_elements = tmpl;
        no_elements.replace(no_elements.find("{{ELEMENTS}}"), 12, "");
        CHECK_THROWS_AS(emit_figma_plugin(r.layout, r.bp, r.assets, no_elements), BadTemplate);
        auto no_helper = tmpl;
        no_helper.replace(no_helper.find("function createShape("), 21, "function makeShape(");
        CHECK_THROWS_AS(emit_figma_plugin(r.layout, r.bp, r.assets, no_helper), BadTemplate);
    }

    TEST_CASE("compositor paints at canvas size")
    {
        auto r = six();
        auto img = BoxCompositor().rasterize(emit_svg(r.layout, r.bp, r.assets));
        CHECK(img.width() == 300);
        CHECK(img.height() == 250);
        // Corner pixel comes from the background gradient.
        CHECK(img.at(0, 0) == fixtures::gradient_image(300, 250).at(0, 0));
        // CTA fill shows between the label and the button edge.
        const auto* cta = r.layout.find("cta");
        CHECK(img.at(static_cast<int>(cta->x) + 3, static_cast<int>(cta->y) + 3) == Color::rgb(0x4A, 0x2E, 0x2B));
    }

    TEST_CASE("compositor paints a red 50x50 rect")
    {
        Blueprint bp;
        bp.canvas = {300, 250};
        bp.elements.push_back(fixtures::box_el("red", AbsolutePosition{0, 0}, 50, 50, Color::rgb(255, 0, 0)));
        auto assets = fixture_assets(bp.canvas);
        auto img = BoxCompositor().rasterize(emit_svg(layout::resolve_layout(bp, {}), bp, assets));
        CHECK(img.at(25, 25) == Color::rgb(255, 0, 0));
        CHECK(img.at(49, 49) == Color::rgb(255, 0, 0));
        CHECK(img.at(50, 50) != Color::rgb(255, 0, 0));
    }

    TEST_CASE("compositor draws text as bars in the fill color")
    {
        Blueprint bp;
        bp.canvas = {300, 100};
        auto t = fixtures::text_el("t", "HELLO", AbsolutePosition{10, 10});
        t.style.font_size = 40;
        t.style.fill = Color::rgb(0, 0, 255);
        bp.elements.push_back(t);
        AssetStore assets;
        assets.add("background", Image(300, 100, Color::white()), "bg.png");
        auto img = BoxCompositor().rasterize(emit_svg(layout::resolve_layout(bp, {}), bp, assets));
        // Baseline at 10 + 32; bar covers [baseline - 28, baseline).
        CHECK(img.at(20, 30) == Color::rgb(0, 0, 255));
        CHECK(img.at(20, 5) == Color::white());
        CHECK(img.at(200, 30) == Color::white());
    }

    TEST_CASE("external rasterizer")
    {
        const std::string svg = R"(<svg xmlns="http://www.w3.org/2000/svg" width="4" height="3"/>)";
        CHECK_THROWS_AS(ExternalCommandRasterizer("false {in} {out}").rasterize(svg), RasterizerFailure);
        try {
            ExternalCommandRasterizer("sh -c 'echo renderer exploded >&2; exit 3' _ {in} {out}").rasterize(svg);
            FAIL("expected failure");
        } catch (const RasterizerFailure& e) {
            CHECK(std::string(e.what()).find("renderer exploded") != std::string::npos);
        }
        auto dir = fixtures::temp_dir("raster");
        save_png(Image(4, 3, Color::rgb(1, 2, 3)), dir / "canned.png");
        ExternalCommandRasterizer ok("test -s {in} && cp '" + (dir / "canned.png").string() + "' {out}");
        auto img = ok.rasterize(svg);
        CHECK(img.width() == 4);
        CHECK(img.at(0, 0) == Color::rgb(1, 2, 3));
        CHECK_THROWS_AS(ExternalCommandRasterizer("rsvg-convert"), ConfigError);
        CHECK(dynamic_cast<BoxCompositor*>(make_rasterizer(std::nullopt).get()) != nullptr);
    }
}
