#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "adcraft/backends/chat.hpp"
#include "adcraft/backends/config.hpp"
#include "adcraft/backends/cost.hpp"
#include "adcraft/backends/demo.hpp"
#include "adcraft/backends/http.hpp"
#include "adcraft/backends/t2i.hpp"
#include "adcraft/blueprint_io.hpp"
#include "adcraft/layout/diagnostics.hpp"
#include "adcraft/resources.hpp"

using namespace adcraft;
using namespace adcraft::backends;
using nlohmann::json;

namespace {

constexpr RetryPolicy fast_retry{3, std::chrono::milliseconds(1)};

/// Local httplib server on an ephemeral port, stopped on destruction.
struct MockServer {
    httplib::Server server;
    int port = 0;
    std::thread thread;

    MockServer() = default;
    void start()
    {
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    std::string url(const std::string& path = "/v1") const { return "http://127.0.0.1:" + std::to_string(port) + path; }
    ~MockServer()
    {
        server.stop();
        if (thread.joinable())
            thread.join();
    }
};

class FlakyProvider : public ChatProvider {
public:
    FlakyProvider(int failures, bool rate_limited) : failures_(failures), rate_limited_(rate_limited) {}
    ChatResponse complete(const ChatRequest&) override
    {
        ++calls;
        if (calls <= failures_)
            throw TransientError("temporary", rate_limited_);
        return ChatResponse{"fine", {10, 2}};
    }
    std::string name() const override { return "flaky"; }
    int calls = 0;

private:
    int failures_;
    bool rate_limited_;
};

UsageRecord chat_record(long long in, long long out) { return UsageRecord{"designer", "p", in, out, 0, 0.0}; }
UsageRecord image_record(int w, int h) { return UsageRecord{"background_designer", "t2i", 0, 0, 1, w * h / 1e6}; }

} // namespace

TEST_SUITE("chat")
{
    TEST_CASE("scripted queue serves replies in order and records usage")
    {
        auto provider = std::make_shared<ScriptedChatProvider>(std::vector<std::string>{"OK", "second"});
        provider->set_usage({11, 3});
        ChatClient client(provider, nullptr);
        auto r = client.chat(make_request("strategist", "sys", "hello"));
        CHECK(r.text == "OK");
        CHECK(r.usage.prompt_tokens == 11);
        CHECK(client.chat(make_request("strategist", "sys", "again")).text == "second");
        CHECK(client.ledger()->size() == 2);
        CHECK(client.ledger()->totals().prompt_tokens == 22);
        CHECK(client.ledger()->records()[0].agent_role == "strategist");
    }

    TEST_CASE("exhausted scripted queue is a MalformedResponse")
    {
        auto provider = std::make_shared<ScriptedChatProvider>(std::vector<std::string>{"only"});
        ChatClient client(provider, nullptr);
        client.chat(make_request("r", "", "x"));
        CHECK_THROWS_AS(client.chat(make_request("r", "", "x")), MalformedResponse);
        CHECK(client.ledger()->size() == 1);
    }

    TEST_CASE("role queues take priority over the shared queue and responders")
    {
        ScriptedChatProvider p({"shared"});
        p.push_for("reviewer", "role");
        p.set_responder("reviewer", [](const ChatRequest&) { return std::string("responder"); });
        auto req = make_request("reviewer", "", "x");
        CHECK(p.complete(req).text == "role");
        CHECK(p.complete(req).text == "shared");
        CHECK(p.complete(req).text == "responder");
        CHECK(p.call_count() == 3);
    }

    TEST_CASE("estimated usage counts characters and images")
    {
        auto req = make_request("r", "abcd", "efgh", {ContentPart::from_image(Image(2, 2))});
        auto u = estimate_usage(req, "12345");
        CHECK(u.prompt_tokens == 2 + 765);
        CHECK(u.completion_tokens == 2);
    }

    TEST_CASE("request checks")
    {
        ChatRequest empty;
        CHECK_THROWS_AS(empty.check(), InvalidArgument);
        auto req = make_request("r", "", "x");
        CHECK(req.temperature == doctest::Approx(0.3));
        req.temperature = 2.5;
        CHECK_THROWS_AS(req.check(), InvalidArgument);
    }

    TEST_CASE("transient failures are retried then succeed")
    {
        auto flaky = std::make_shared<FlakyProvider>(2, false);
        ChatClient client(flaky, nullptr, fast_retry);
        CHECK(client.chat(make_request("r", "", "x")).text == "fine");
        CHECK(flaky->calls == 3);
        CHECK(client.ledger()->size() == 1);
    }

    TEST_CASE("retry cap maps to RateLimited or ProviderFailure")
    {
        auto limited = std::make_shared<FlakyProvider>(10, true);
        ChatClient a(limited, nullptr, fast_retry);
        CHECK_THROWS_AS(a.chat(make_request("r", "", "x")), RateLimited);
        CHECK(limited->calls == 3);
        CHECK(a.ledger()->size() == 0);

        auto down = std::make_shared<FlakyProvider>(10, false);
        ChatClient b(down, nullptr, fast_retry);
        CHECK_THROWS_AS(b.chat(make_request("r", "", "x")), ProviderFailure);
    }

    TEST_CASE("ledger is safe under concurrent appends")
    {
        UsageLedger ledger;
        std::vector<std::thread> threads;
        for (int t = 0; t < 8; ++t)
            threads.emplace_back([&] {
                for (int i = 0; i < 250; ++i)
                    ledger.record(chat_record(1, 1));
            });
        for (auto& t : threads)
            t.join();
        CHECK(ledger.size() == 2000);
        CHECK(ledger.totals().completion_tokens == 2000);
    }
}

TEST_SUITE("http")
{
    TEST_CASE("split_url keeps the path prefix")
    {
        auto u = split_url("https://api.example.com/v1/");
        CHECK(u.origin == "https://api.example.com");
        CHECK(u.path == "/v1");
        CHECK(split_url("http://localhost:8080").path.empty());
        CHECK_THROWS_AS(split_url("ftp://x"), ConfigError);
    }

    TEST_CASE("status mapping")
    {
        CHECK_NOTHROW(raise_for_status(200, "", "t"));
        CHECK_THROWS_AS(raise_for_status(401, "", "t"), AuthError);
        CHECK_THROWS_AS(raise_for_status(403, "", "t"), AuthError);
        CHECK_THROWS_AS(raise_for_status(400, "", "t"), ProviderFailure);
        try {
            raise_for_status(429, "", "t");
            FAIL("expected throw");
        } catch (const TransientError& e) {
            CHECK(e.rate_limited());
        }
        try {
            raise_for_status(503, "", "t");
            FAIL("expected throw");
        } catch (const TransientError& e) {
            CHECK_FALSE(e.rate_limited());
        }
    }

    TEST_CASE("openai dialect against a mock server")
    {
        MockServer mock;
        json seen;
        std::string auth;
        mock.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
            seen = json::parse(req.body);
            auth = req.get_header_value("Authorization");
            res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"canned payload"}}],)"
                            R"("usage":{"prompt_tokens":120,"completion_tokens":7}})",
                            "application/json");
        });
        mock.start();
        ::setenv("ADCRAFT_TEST_KEY", "sk-test", 1);
        auto provider = std::make_shared<HttpChatProvider>("openai", HttpEndpoint{mock.url(), "m1", "ADCRAFT_TEST_KEY", 5});
        ChatClient client(provider, nullptr, fast_retry);
        auto r = client.chat(make_request("reviewer", "be brief", "look", {ContentPart::from_image(Image(2, 2))}));
        CHECK(r.text == "canned payload");
        CHECK(r.usage.prompt_tokens == 120);
        CHECK(r.usage.completion_tokens == 7);
        CHECK(auth == "Bearer sk-test");
        CHECK(seen["model"] == "m1");
        CHECK(seen["temperature"].get<double>() == doctest::Approx(0.3));
        CHECK(seen["messages"][0]["role"] == "system");
        CHECK(seen["messages"][1]["content"][1]["type"] == "image_url");
        CHECK(seen["messages"][1]["content"][1]["image_url"]["url"].get<std::string>().rfind("data:image/png;base64,", 0) == 0);
        CHECK(client.ledger()->records()[0].provider == "openai:m1");
    }

    TEST_CASE("anthropic dialect against a mock server")
    {
        MockServer mock;
        json seen;
        std::string key, version;
        mock.server.Post("/v1/messages", [&](const httplib::Request& req, httplib::Response& res) {
            seen = json::parse(req.body);
            key = req.get_header_value("x-api-key");
            version = req.get_header_value("anthropic-version");
            res.set_content(R"({"content":[{"type":"text","text":"part one "},{"type":"text","text":"part two"}],)"
                            R"("usage":{"input_tokens":50,"output_tokens":4}})",
                            "application/json");
        });
        mock.start();
        ::setenv("ADCRAFT_TEST_KEY", "ak-test", 1);
        HttpChatProvider provider("anthropic", HttpEndpoint{mock.url(), "m2", "ADCRAFT_TEST_KEY", 5});
        auto r = provider.complete(make_request("strategist", "sys", "hi", {ContentPart::from_image(Image(1, 1))}));
        CHECK(r.text == "part one part two");
        CHECK(r.usage.prompt_tokens == 50);
        CHECK(key == "ak-test");
        CHECK(version == "2023-06-01");
        CHECK(seen["system"] == "sys");
        CHECK(seen["messages"][0]["content"][1]["source"]["type"] == "base64");
    }

    TEST_CASE("server errors are retried, auth errors are not")
    {
        MockServer mock;
        int hits = 0;
        mock.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
            ++hits;
            if (hits < 3) {
                res.status = 500;
                res.set_content("boom", "text/plain");
                return;
            }
            res.set_content(R"({"choices":[{"message":{"content":"ok"}}]})", "application/json");
        });
        mock.server.Post("/denied/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
            ++hits;
            res.status = 401;
        });
        mock.start();
        auto provider = std::make_shared<HttpChatProvider>("openai", HttpEndpoint{mock.url(), "m", "", 5});
        ChatClient client(provider, nullptr, fast_retry);
        CHECK(client.chat(make_request("r", "", "x")).text == "ok");
        CHECK(hits == 3);

        hits = 0;
        auto denied = std::make_shared<HttpChatProvider>("openai", HttpEndpoint{mock.url("/denied"), "m", "", 5});
        ChatClient c2(denied, nullptr, fast_retry);
        CHECK_THROWS_AS(c2.chat(make_request("r", "", "x")), AuthError);
        CHECK(hits == 1);
    }

    TEST_CASE("malformed replies and missing credentials")
    {
        MockServer mock;
        mock.server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("{\"unexpected\": true}", "application/json");
        });
        mock.start();
        HttpChatProvider provider("openai", HttpEndpoint{mock.url(), "m", "", 5});
        CHECK_THROWS_AS(provider.complete(make_request("r", "", "x")), MalformedResponse);

        ::unsetenv("ADCRAFT_UNSET_KEY");
        HttpChatProvider keyless("openai", HttpEndpoint{mock.url(), "m", "ADCRAFT_UNSET_KEY", 5});
        CHECK_THROWS_AS(keyless.complete(make_request("r", "", "x")), AuthError);
    }

    TEST_CASE("image endpoint returns a decoded PNG")
    {
        MockServer mock;
        json seen;
        const Image canned(1024, 864, Color::rgb(10, 120, 200));
        mock.server.Post("/v1/images/generations", [&](const httplib::Request& req, httplib::Response& res) {
            seen = json::parse(req.body);
            res.set_content(json{{"data", json::array({json{{"b64_json", base64_encode(encode_png(canned))}}})}}.dump(),
                            "application/json");
        });
        mock.start();
        auto provider = std::make_shared<HttpT2IProvider>(HttpEndpoint{mock.url(), "img", "", 5}, default_t2i_sizes());
        auto ledger = std::make_shared<UsageLedger>();
        ImageClient client(provider, ledger, fast_retry);
        T2IRequest req;
        req.prompt = "sunset";
        req.width = 1024;
        req.height = 864;
        auto img = client.generate(req);
        CHECK(img == canned);
        CHECK(seen["size"] == "1024x864");
        CHECK(seen["negative_prompt"].get<std::string>().find("text") != std::string::npos);
        REQUIRE(ledger->size() == 1);
        CHECK(ledger->records()[0].images == 1);
        CHECK(ledger->records()[0].megapixels == doctest::Approx(0.884736));
    }
}

TEST_SUITE("t2i")
{
    TEST_CASE("stub output has the requested size and is deterministic per seed")
    {
        StubT2IProvider stub;
        T2IRequest req;
        req.prompt = "sunset";
        req.width = 1024;
        req.height = 864;
        req.seed = 7;
        auto a = stub.generate(req);
        auto b = stub.generate(req);
        CHECK(a.width() == 1024);
        CHECK(a.height() == 864);
        CHECK(encode_png(a) == encode_png(b));
        req.seed = 8;
        CHECK_FALSE(stub.generate(req) == a);
        CHECK_FALSE(has_glyph_marks(a));
    }

    TEST_CASE("FORCE_TEXT marker draws glyph marks")
    {
        StubT2IProvider stub;
        T2IRequest req;
        req.prompt = "neon city FORCE_TEXT";
        req.width = 1344;
        req.height = 768;
        CHECK(has_glyph_marks(stub.generate(req)));
    }

    TEST_CASE("forced first n images")
    {
        StubT2IProvider stub(default_t2i_sizes(), 2);
        T2IRequest req;
        req.prompt = "meadow";
        CHECK(has_glyph_marks(stub.generate(req)));
        CHECK(has_glyph_marks(stub.generate(req)));
        CHECK_FALSE(has_glyph_marks(stub.generate(req)));
        CHECK(stub.call_count() == 3);
    }

    TEST_CASE("unsupported size")
    {
        StubT2IProvider stub;
        T2IRequest req;
        req.width = 999;
        req.height = 999;
        CHECK_THROWS_AS(stub.generate(req), UnsupportedSize);
        auto ledger = std::make_shared<UsageLedger>();
        ImageClient client(std::make_shared<StubT2IProvider>(), ledger);
        CHECK_THROWS_AS(client.generate(req), UnsupportedSize);
        CHECK(ledger->size() == 0);
    }

    TEST_CASE("random prompts never produce black pixels without forcing")
    {
        StubT2IProvider stub;
        std::mt19937 rng(3);
        for (int i = 0; i < 20; ++i) {
            T2IRequest req;
            req.prompt = "prompt " + std::to_string(rng());
            req.width = 864;
            req.height = 1024;
            req.seed = rng();
            CHECK_FALSE(has_glyph_marks(stub.generate(req)));
        }
    }
}

TEST_SUITE("cost")
{
    struct Row {
        const char* name;
        long long prompt;
        long long completion;
        int images;
        double llm;
        double image;
        double total;
    };

    // Token and image counts with their known dollar figures.
    const Row rows[] = {
        {"figma single", 78266, 5470, 1, 0.317, 0.002, 0.319},
        {"svg single", 15921, 2672, 1, 0.088, 0.002, 0.090},
        {"figma refinement", 284677, 23772, 1, 1.211, 0.002, 1.213},
        {"svg refinement", 54362, 12663, 1, 0.353, 0.002, 0.355},
        {"figma four variations", 261150, 15213, 4, 1.012, 0.008, 1.020},
        {"svg four variations", 24865, 6006, 4, 0.165, 0.008, 0.173},
    };

    TEST_CASE("reference cost rows")
    {
        for (const auto& row : rows) {
            CAPTURE(row.name);
            std::vector<UsageRecord> records{chat_record(row.prompt, row.completion)};
            for (int i = 0; i < row.images; ++i)
                records.push_back(image_record(1024, 864));
            auto c = compute_cost(records);
            // Oracle straight from the rates.
            const double llm = row.prompt * 3.0 / 1e6 + row.completion * 15.0 / 1e6;
            CHECK(c.llm_cost == doctest::Approx(llm).epsilon(1e-12));
            CHECK(std::abs(round_cost(c.llm_cost) - row.llm) <= 0.001 + 1e-9);
            CHECK(std::abs(round_cost(c.image_cost) - row.image) <= 0.001 + 1e-9);
            CHECK(std::abs(round_cost(c.total) - row.total) <= 0.001 + 1e-9);
        }
    }

    TEST_CASE("per-image cost of one 1024x864 image")
    {
        auto c = compute_cost({image_record(1024, 864)});
        CHECK(round_cost(c.image_cost) == doctest::Approx(0.002));
        Rates exact;
        exact.image_increment.reset();
        CHECK(compute_cost({image_record(1024, 864)}, exact).image_cost == doctest::Approx(0.884736 * 0.0027));
    }

    TEST_CASE("empty ledger costs nothing")
    {
        auto c = compute_cost({});
        CHECK(c.total == 0.0);
        CHECK(round_cost(c.total) == 0.0);
    }

    TEST_CASE("cost is linear over ledger concatenation")
    {
        std::mt19937 rng(11);
        std::uniform_int_distribution<long long> tok(0, 100000);
        std::uniform_int_distribution<int> n(0, 6);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<UsageRecord> a, b;
            for (int i = n(rng); i > 0; --i)
                a.push_back(chat_record(tok(rng), tok(rng)));
            for (int i = n(rng); i > 0; --i)
                b.push_back(rng() % 2 ? image_record(1024, 864) : chat_record(tok(rng), tok(rng)));
            auto ab = a;
            ab.insert(ab.end(), b.begin(), b.end());
            auto ca = compute_cost(a), cb = compute_cost(b), cab = compute_cost(ab);
            CHECK(cab.llm_cost == doctest::Approx(ca.llm_cost + cb.llm_cost).epsilon(1e-12));
            CHECK(cab.image_cost == doctest::Approx(ca.image_cost + cb.image_cost).epsilon(1e-12));
            CHECK(cab.total == doctest::Approx(ca.total + cb.total).epsilon(1e-12));
            CHECK(cab.images == ca.images + cb.images);
        }
    }

    TEST_CASE("negative rates are rejected")
    {
        Rates r;
        r.input_per_mtok = -1;
        CHECK_THROWS_AS(compute_cost({}, r), InvalidArgument);
        CHECK_THROWS_AS(rates_from_json(json{{"output_per_mtok", -2}}), ConfigError);
    }
}

TEST_SUITE("config")
{
    TEST_CASE("defaults are fully offline")
    {
        auto c = default_config();
        CHECK(c.chat.provider == "scripted");
        CHECK(c.t2i.provider == "stub");
        CHECK(c.chat.temperature == doctest::Approx(0.3));
        CHECK(c.judge.temperature == 0.0);
        CHECK(c.t2i.sizes == default_t2i_sizes());
        CHECK(c.pipeline.max_background_attempts == 5);
        CHECK_FALSE(c.rasterizer_command.has_value());
    }

    TEST_CASE("sections override defaults")
    {
        auto c = config_from_json(json::parse(R"({
            "chat": {"provider": "openai", "model": "m", "api_key_env": "KEY", "temperature": 0.5},
            "t2i": {"sizes": ["512x512", [640, 480]], "force_text_first_n": 2},
            "rates": {"input_per_mtok": 2.5},
            "pipeline": {"refine_iters": 4, "variations": 3, "clamp": true, "workers": 2},
            "rasterizer": {"command": "rsvg-convert {in} -o {out}"},
            "seed": 42
        })"));
        CHECK(c.chat.provider == "openai");
        CHECK(c.chat.base_url == "https://api.openai.com/v1");
        CHECK(c.judge.provider == "openai");
        CHECK(c.judge.temperature == 0.0);
        CHECK(c.t2i.sizes == SizeTable{{512, 512}, {640, 480}});
        CHECK(c.rates.input_per_mtok == 2.5);
        CHECK(c.rates.output_per_mtok == 15.0);
        CHECK(c.pipeline.refine_iters == 4);
        CHECK(c.pipeline.clamp);
        CHECK(*c.rasterizer_command == "rsvg-convert {in} -o {out}");
        CHECK(c.seed == 42);
    }

    TEST_CASE("credentials in the file are refused")
    {
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"chat": {"api_key": "sk-123"}})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"t2i": {"apiKey": "x"}})")), ConfigError);
    }

    TEST_CASE("bad values are ConfigErrors")
    {
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"chat": {"provider": "other"}})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"chat": {"temperature": "hot"}})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"t2i": {"sizes": ["big"]}})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"pipeline": {"workers": 0}})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(json::parse("[]")), ConfigError);
        CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    }

    TEST_CASE("factories")
    {
        auto c = default_config();
        c.chat.replies = {"first"};
        auto chat = make_chat_provider(c.chat, 1);
        CHECK(chat->name() == "scripted");
        CHECK(chat->complete(make_request("strategist", "", "x")).text == "first");
        auto t2i = make_t2i_provider(c.t2i);
        CHECK(t2i->name() == "stub-t2i");
        c.t2i.provider = "http";
        c.t2i.base_url = "http://127.0.0.1:1/v1";
        CHECK(make_t2i_provider(c.t2i)->name().rfind("http:", 0) == 0);
    }
}

TEST_SUITE("demo provider")
{
    const std::vector<CanvasSize> iab{{300, 250}, {728, 90}, {160, 600}, {320, 50}, {300, 600}, {970, 250}, {336, 280},
                                      {468, 60},  {250, 250}, {200, 200}, {120, 600}, {970, 90}, {320, 100}};

    TEST_CASE("demo blueprints are valid and fit every standard size")
    {
        const std::vector<std::pair<int, int>> logos{{120, 60}, {64, 64}, {300, 60}, {40, 90}};
        DemoCopy copy{"Fresh Deals Every Week", "Made for busy families", "Shop Now"};
        for (auto size : iab)
            for (auto [lw, lh] : logos)
                for (int v = 0; v < 4; ++v)
                    for (int t = 0; t < 5; ++t) {
                        CAPTURE(format_size(size));
                        CAPTURE(v);
                        CAPTURE(t);
                        DemoDesignParams p;
                        p.canvas = size;
                        p.logo_width = lw;
                        p.logo_height = lh;
                        p.variation = v;
                        p.iteration = t;
                        auto bp = demo_blueprint(p, copy);
                        auto parsed = parse_blueprint(serialize_blueprint(bp), {std::set<std::string>{"logo"}});
                        REQUIRE(parsed.ok());
                        layout::AssetSizes assets{{"logo", {lw, lh}}};
                        auto resolved = layout::resolve_layout(bp, layout::TextMetricsTable{}, assets);
                        auto clamped = layout::clamp_into_canvas(resolved);
                        CHECK(layout::detect_overflow(clamped).overflow_elements == 0);
                    }
    }

    TEST_CASE("demo responders follow the agent contracts")
    {
        auto p = make_demo_chat_provider(5);
        auto s = p->complete(make_request("strategist", "", "User requirements: Promote our spring sale for young parents.")).text;
        CHECK(labeled_value(s, "Purpose:") == "Promote our spring sale");
        CHECK(labeled_value(s, "Audience:") == "young parents");
        CHECK_FALSE(labeled_value(s, "Mood:").empty());

        StubT2IProvider stub;
        T2IRequest forced;
        forced.prompt = "FORCE_TEXT";
        auto yes = p->complete(make_request("text_checker", "", "?", {ContentPart::from_image(stub.generate(forced))}));
        CHECK(yes.text == "yes");
        T2IRequest clean;
        clean.prompt = "calm";
        CHECK(p->complete(make_request("text_checker", "", "?", {ContentPart::from_image(stub.generate(clean))})).text == "no");

        auto fg = p->complete(make_request("foreground_designer", "", "Canvas: 728x90\nLogo size: 100x50\nCurrent iteration: 0"));
        auto bp = parse_blueprint(extract_json_document(fg.text));
        REQUIRE(bp.ok());
        CHECK(bp.blueprint->canvas == CanvasSize{728, 90});

        CHECK(p->complete(make_request("reviewer", "", "Current iteration: 0")).text.find("VERDICT: REVISE") != std::string::npos);
        CHECK(p->complete(make_request("reviewer", "", "Current iteration: 1")).text.find("VERDICT: PRODUCTION_READY") !=
              std::string::npos);
        CHECK(p->complete(make_request("judge", "", "rubric")).text.find("SCORE: ") != std::string::npos);
    }

    TEST_CASE("shipped layout demonstrations are valid blueprints")
    {
        auto doc = json::parse(load_resource("prompts/layout_demonstrations.json"));
        REQUIRE(doc.is_array());
        CHECK(doc.size() >= 3);
        for (const auto& d : doc) {
            auto r = parse_blueprint(d);
            CHECK_MESSAGE(r.ok(), format_violations(r.violations));
        }
    }

    TEST_CASE("every rubric keeps all five scale anchors")
    {
        for (const char* m : {"TAA", "LPS", "AQS", "CTAE", "CPYQ", "BIS"}) {
            auto text = load_resource(std::string("rubrics/") + m + ".txt");
            for (int s = 1; s <= 5; ++s)
                CHECK(text.find(std::to_string(s) + " – ") != std::string::npos);
        }
    }
}
