#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "adcraft/errors.hpp"
#include "adcraft/layout/diagnostics.hpp"
#include "adcraft/layout/resolve.hpp"
#include "adcraft/layout/text_metrics.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/layout_oracle.hpp"

using namespace adcraft;
using namespace adcraft::layout;
using fixtures::rel;
using fixtures::dyadic_metrics;
using fixtures::oracle_resolve;
using fixtures::random_acyclic;

namespace {

double oracle_luminance(int r8, int g8, int b8)
{
    auto lin = [](int v) {
        double c = v / 255.0;
        return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    };
    return 0.2126 * lin(r8) + 0.7152 * lin(g8) + 0.0722 * lin(b8);
}

ResolvedLayout single_box(double x, double y, double w, double h, CanvasSize canvas = {300, 250})
{
    ResolvedLayout l;
    l.canvas = canvas;
    ResolvedBox b;
    b.id = "a";
    b.x = x;
    b.y = y;
    b.width = w;
    b.height = h;
    l.boxes.push_back(b);
    l.resolution_order.push_back("a");
    return l;
}

} // namespace

TEST_SUITE("layout")
{
    TEST_CASE("measure_text examples")
    {
        TextMetricsTable m;
        Style s;
        s.font_size = 20;
        auto shop = measure_text("Shop Now", s, m);
        CHECK(shop.width == doctest::Approx(88.0));
        CHECK(shop.line_count == 1);
        CHECK(shop.height == doctest::Approx(24.0));

        s.font_size = 10;
        auto a = measure_text("A", s, m);
        CHECK(a.width == doctest::Approx(5.5));
        CHECK(a.height == doctest::Approx(12.0));
        CHECK(a.line_count == 1);

        auto empty = measure_text("", s, m);
        CHECK(empty.width == 0.0);
        CHECK(empty.height == doctest::Approx(12.0));
        CHECK(empty.line_count == 1);
    }

    TEST_CASE("measure_text wraps greedily and counts code points")
    {
        auto m = dyadic_metrics();
        Style s;
        s.font_size = 16; // 8 px per character
        auto r = measure_text("aa bb cc dd", s, m, 40.0);
        CHECK(r.lines == std::vector<std::string>{"aa bb", "cc dd"});
        CHECK(r.width == 40.0);
        CHECK(r.height == 2 * 20.0);
        auto jp = measure_text("今すぐ購入", s, m);
        CHECK(jp.width == 40.0);
        auto long_word = measure_text("abcdefghij", s, m, 32.0);
        CHECK(long_word.line_count == 3);
        CHECK(long_word.width <= 32.0);
        s.letter_spacing = 2;
        CHECK(measure_text("ab", s, m).width == 20.0);
        CHECK(measure_text("a\nbcd", s, m).line_count == 2);
    }

    TEST_CASE("metrics table bounds")
    {
        CHECK_NOTHROW(TextMetricsTable{}.check());
        CHECK_THROWS_AS((TextMetricsTable{0.0, 0.6, 0.65, 1.2}.check()), InvalidArgument);
        CHECK_THROWS_AS((TextMetricsTable{0.55, 0.6, 0.65, 2.5}.check()), InvalidArgument);
    }

    TEST_CASE("resolver examples")
    {
        Blueprint bp;
        bp.canvas = {300, 250};
        bp.elements.push_back(fixtures::box_el("A", AbsolutePosition{10, 10}, 100, 40));
        bp.elements.push_back(
            fixtures::box_el("B", rel("A", NinePoint::bottom_left, NinePoint::top_left, 0, 20), 80, 30));
        bp.elements.push_back(fixtures::box_el("C", rel("canvas", NinePoint::center, NinePoint::center), 100, 50));
        auto l = resolve_layout(bp, TextMetricsTable{});
        CHECK(l.find("B")->x == 10.0);
        CHECK(l.find("B")->y == 70.0);
        CHECK(l.find("C")->x == 100.0);
        CHECK(l.find("C")->y == 100.0);

        auto oracle = oracle_resolve(bp, TextMetricsTable{});
        CHECK(oracle.at("B").x == 10.0);
        CHECK(oracle.at("B").y == 70.0);
    }

    TEST_CASE("two-element cycle and missing reference")
    {
        Blueprint bp;
        bp.canvas = {300, 250};
        bp.elements.push_back(fixtures::box_el("A", rel("B", NinePoint::top_left, NinePoint::top_left), 10, 10));
        bp.elements.push_back(fixtures::box_el("B", rel("A", NinePoint::top_left, NinePoint::top_left), 10, 10));
        try {
            resolve_layout(bp, TextMetricsTable{});
            FAIL("expected CyclicReference");
        } catch (const CyclicReference& e) {
            CHECK(e.ids() == std::vector<std::string>{"A", "B"});
        }
        bp.elements[0].position = rel("nope", NinePoint::top_left, NinePoint::top_left);
        bp.elements[1].position = AbsolutePosition{};
        CHECK_THROWS_AS(resolve_layout(bp, TextMetricsTable{}), MissingReference);
    }

    TEST_CASE("intrinsic logo keeps the asset aspect ratio")
    {
        Blueprint bp;
        bp.canvas = {300, 250};
        bp.elements.push_back(fixtures::logo_el("logo", AbsolutePosition{0, 0}, 40));
        CHECK_THROWS_AS(resolve_layout(bp, TextMetricsTable{}), MissingAssetSize);
        AssetSizes sizes{{"logo", {457, 123}}};
        auto l = resolve_layout(bp, TextMetricsTable{}, sizes);
        const auto* b = l.find("logo");
        CHECK(b->height == 40.0);
        CHECK(b->width == std::floor(40.0 * 457 / 123 + 0.5));
        CHECK(std::fabs(b->width / b->height - 457.0 / 123.0) / (457.0 / 123.0) < 0.005);
        for (int h = 8; h <= 200; ++h) {
            double w = scale_to_height({457, 123}, h);
            CHECK(std::fabs(w / h - 457.0 / 123.0) / (457.0 / 123.0) < 0.005 + 0.5 / h);
        }
    }

    TEST_CASE("resolver matches the recursive oracle on random forests")
    {
        std::mt19937 rng(2024);
        auto m = dyadic_metrics();
        for (int iter = 0; iter < 300; ++iter) {
            auto bp = random_acyclic(rng, 1 + static_cast<int>(rng() % 10));
            auto l = resolve_layout(bp, m);
            auto oracle = oracle_resolve(bp, m);
            REQUIRE(l.boxes.size() == bp.elements.size());
            for (const auto& b : l.boxes) {
                const auto& o = oracle.at(b.id);
                CHECK(b.x == o.x);
                CHECK(b.y == o.y);
                CHECK(b.width == o.w);
                CHECK(b.height == o.h);
                CHECK(b.width > 0);
                CHECK(b.height > 0);
            }
        }
    }

    TEST_CASE("purity, permutation independence and anchor round trip")
    {
        std::mt19937 rng(77);
        auto m = dyadic_metrics();
        for (int iter = 0; iter < 200; ++iter) {
            auto bp = random_acyclic(rng, 2 + static_cast<int>(rng() % 9));
            auto l1 = resolve_layout(bp, m);
            CHECK(resolve_layout(bp, m) == l1);

            auto shuffled = bp;
            std::shuffle(shuffled.elements.begin(), shuffled.elements.end(), rng);
            auto l2 = resolve_layout(shuffled, m);
            for (const auto& b : l1.boxes)
                CHECK(*l2.find(b.id) == b);
            CHECK(detect_overflow(l2).overflow_elements == detect_overflow(l1).overflow_elements);
            for (std::size_t i = 0; i < shuffled.elements.size(); ++i)
                CHECK(l2.boxes[i].id == shuffled.elements[i].id);

            for (const auto& e : bp.elements) {
                const auto* r = e.relative();
                if (!r)
                    continue;
                const auto* self = l1.find(e.id);
                Point target;
                if (r->reference == "canvas") {
                    auto f = anchor_fraction(r->ref_anchor);
                    target = {f.fx * bp.canvas.width, f.fy * bp.canvas.height};
                } else {
                    target = l1.find(r->reference)->anchor(r->ref_anchor);
                }
                Point p = self->anchor(r->self_anchor);
                CHECK(p.x == target.x + r->offset.dx);
                CHECK(p.y == target.y + r->offset.dy);
            }
        }
    }

    TEST_CASE("overflow detection")
    {
        auto l = single_box(280, 10, 40, 20);
        auto r = detect_overflow(l);
        CHECK(r.overflow_elements == 1);
        CHECK(r.overflow_ids == std::vector<std::string>{"a"});
        CHECK(r.overflow_rate == 1.0);
        CHECK(detect_overflow(single_box(260, 10, 40, 20)).overflow_elements == 0);
        CHECK(detect_overflow(ResolvedLayout{}).overflow_rate == 0.0);

        CHECK(std::fabs(OverflowReport::from_counts(2220, 41).percent() - 1.85) < 0.005);
        CHECK(std::fabs(OverflowReport::from_counts(2510, 26).percent() - 1.04) < 0.005);
        CHECK(to_json(OverflowReport::from_counts(2220, 41))["overflow_percent"] == 1.85);
        auto pooled = OverflowReport::from_counts(2220, 41);
        pooled.merge(OverflowReport::from_counts(2510, 26));
        CHECK(pooled.overflow_elements == 67);
        CHECK(pooled.overflow_rate == doctest::Approx(67.0 / 4730));
    }

    TEST_CASE("clamp examples")
    {
        auto fixed = clamp_into_canvas(single_box(280, 10, 40, 20), 0);
        CHECK(fixed.boxes[0].x == 260.0);
        CHECK(fixed.boxes[0].y == 10.0);
        CHECK(fixed.boxes[0].width == 40.0);
        auto inside = single_box(12, 13, 40, 20);
        CHECK(clamp_into_canvas(inside, 10) == inside);
        CHECK_THROWS_AS(clamp_into_canvas(single_box(-10, 0, 400, 20), 0), UnfixableOverflow);
        auto margin = clamp_into_canvas(single_box(-5, -5, 40, 20), 8);
        CHECK(margin.boxes[0].x == 8.0);
        CHECK(margin.boxes[0].y == 8.0);
    }

    TEST_CASE("clamp is idempotent and removes overflow for fitting layouts")
    {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> coord(-200, 500);
        std::uniform_real_distribution<double> dim(0.5, 250);
        std::uniform_real_distribution<double> mar(0, 30);
        for (int iter = 0; iter < 500; ++iter) {
            ResolvedLayout l;
            l.canvas = {300, 250};
            int n = 1 + static_cast<int>(rng() % 8);
            for (int i = 0; i < n; ++i) {
                ResolvedBox b;
                b.id = "b" + std::to_string(i);
                b.x = coord(rng);
                b.y = coord(rng);
                b.width = std::min(dim(rng), 300.0);
                b.height = std::min(dim(rng), 250.0);
                l.boxes.push_back(b);
            }
            double margin = mar(rng);
            auto once = clamp_into_canvas(l, margin);
            CHECK(clamp_into_canvas(once, margin) == once);
            CHECK(detect_overflow(once).overflow_rate == 0.0);
            for (std::size_t i = 0; i < l.boxes.size(); ++i) {
                CHECK(once.boxes[i].width == l.boxes[i].width);
                CHECK(once.boxes[i].height == l.boxes[i].height);
                if (box_inside_canvas(l.boxes[i], l.canvas))
                    CHECK(once.boxes[i] == l.boxes[i]);
            }
        }
    }

    TEST_CASE("spacing diagnostics")
    {
        ResolvedLayout l;
        l.canvas = {728, 250};
        ResolvedBox a{"a", ElementKind::shape, 100, 50, 100, 40};
        ResolvedBox b{"b", ElementKind::shape, 100, 95, 100, 40};
        l.boxes = {a, b};
        auto v = spacing_diagnostics(l);
        CHECK(std::count_if(v.begin(), v.end(), [](const SpacingViolation& s) {
                  return s.type == SpacingViolation::Type::pair;
              }) == 1);

        // Anchored on purpose: b references a with a small offset.
        l.boxes[1].reference = "a";
        l.boxes[1].offset = {0, 5};
        v = spacing_diagnostics(l);
        CHECK(std::none_of(v.begin(), v.end(), [](const SpacingViolation& s) {
            return s.type == SpacingViolation::Type::pair;
        }));

        ResolvedLayout banner;
        banner.canvas = {728, 90};
        banner.boxes = {ResolvedBox{"logo", ElementKind::logo, 2, 30, 60, 30}};
        v = spacing_diagnostics(banner);
        REQUIRE(v.size() == 1);
        CHECK(v[0].type == SpacingViolation::Type::edge);

        CHECK(spacing_diagnostics(ResolvedLayout{}).empty());
    }

    TEST_CASE("contrast ratio")
    {
        CHECK(contrast_ratio(Color::white(), Color::black()) == doctest::Approx(21.0));
        auto grey = Color::rgb(0x77, 0x77, 0x77);
        double expected = (1.0 + 0.05) / (oracle_luminance(0x77, 0x77, 0x77) + 0.05);
        CHECK(std::fabs(contrast_ratio(grey, Color::white()) - expected) < 1e-3);
        CHECK(std::fabs(contrast_ratio(grey, Color::white()) - 4.478) < 1e-3);

        std::mt19937 rng(3);
        for (int i = 0; i < 1000; ++i) {
            Color a = Color::rgb(rng() % 256, rng() % 256, rng() % 256);
            Color b = Color::rgb(rng() % 256, rng() % 256, rng() % 256);
            CHECK(contrast_ratio(a, a) == doctest::Approx(1.0));
            CHECK(contrast_ratio(a, b) == doctest::Approx(contrast_ratio(b, a)));
            CHECK(contrast_ratio(a, b) >= 1.0);
            double la = oracle_luminance(a.r, a.g, a.b);
            double lb = oracle_luminance(b.r, b.g, b.b);
            double o = (std::max(la, lb) + 0.05) / (std::min(la, lb) + 0.05);
            CHECK(std::fabs(contrast_ratio(a, b) - o) < 1e-9);
        }
    }

    TEST_CASE("contrast findings use what is painted underneath")
    {
        auto bp = fixtures::six_element_fixture();
        AssetSizes sizes{{"logo", {64, 32}}};
        auto l = resolve_layout(bp, TextMetricsTable{}, sizes);
        auto findings = contrast_diagnostics(bp, l);
        auto find = [&](const std::string& id) {
            return *std::find_if(findings.begin(), findings.end(), [&](const auto& f) { return f.id == id; });
        };
        // Headline sits on the translucent white panel.
        CHECK(find("headline").background == Color{255, 255, 255, 204});
        CHECK(find("cta").foreground == Color::white());
        CHECK(find("cta").passes);
    }
}
