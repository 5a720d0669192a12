#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <thread>

#include "csi/proxy/server.hpp"
#include "csi/wire/translate.hpp"

using namespace csi;
using namespace csi::proxy;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string temp_path(const std::string& stem) {
    static std::atomic<int> counter{0};
    return (fs::temp_directory_path() /
            (stem + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++)))
        .string();
}

/// Minimal chat-completions endpoint with a scripted response.
struct StubUpstream {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> hits{0};
    json next_response;
    json last_request;
    std::mutex mutex;

    void start() {
        server.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            {
                std::lock_guard<std::mutex> lock(mutex);
                last_request = json::parse(req.body);
            }
            res.set_content(next_response.dump(), "application/json");
        });
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    void stop() {
        server.stop();
        if (thread.joinable()) thread.join();
    }
    ~StubUpstream() { stop(); }

    json captured() {
        std::lock_guard<std::mutex> lock(mutex);
        return last_request;
    }
};

json cc_response(std::int64_t in_tok, std::int64_t out_tok, const std::string& text = "ack") {
    return {
        {"id", "chatcmpl-stub"},
        {"object", "chat.completion"},
        {"created", 0},
        {"model", "alias2-mini"},
        {"choices", json::array({{{"index", 0},
                                  {"message", {{"role", "assistant"}, {"content", text}}},
                                  {"finish_reason", "stop"}}})},
        {"usage",
         {{"prompt_tokens", in_tok}, {"completion_tokens", out_tok}, {"total_tokens", in_tok + out_tok}}},
    };
}

json anthropic_request(const std::string& text) {
    return {{"model", "alias2-mini"},
            {"messages", json::array({{{"role", "user"},
                                       {"content", json::array({{{"type", "text"}, {"text", text}}})}}})},
            {"max_tokens", 1024}};
}

RouteTable make_table(const std::string& scaffold, int upstream_port) {
    RouteTable t;
    t.scaffold_id = scaffold;
    t.routes.push_back({"/v1/messages", wire::Dialect::AnthropicMessages,
                        wire::Dialect::OpenAiChatCompletions, "127.0.0.1", upstream_port,
                        "/v1/chat/completions"});
    return t;
}

struct FixedHook : InjectionHook {
    std::optional<std::string> text;
    std::optional<std::string> before_forward(const std::string&, const std::string&) override {
        return text;
    }
};

} // namespace

TEST_CASE("cost model") {
    const CostRate rate{5.0};
    SUBCASE("worked examples") {
        CHECK(compute_cost_e4({1500, 300}, rate) == 90);        // $0.0090
        CHECK(compute_cost_e4({71800, 11300}, rate) == 4155);   // $0.4155
        CHECK(compute_cost_e4({0, 0}, rate) == 0);
        // Scoreboard-scale figure: 1.0246B combined tokens -> $5123 flat.
        CHECK(compute_cost_e4({1010000000, 14600000}, rate) == 51230000);
    }
    SUBCASE("round half to even at the 4th decimal") {
        CHECK(compute_cost_e4({10, 0}, rate) == 0);   // 0.00050 -> 0.0000
        CHECK(compute_cost_e4({30, 0}, rate) == 2);   // 0.00150 -> 0.0002
        CHECK(compute_cost_e4({50, 0}, rate) == 2);   // 0.00250 -> 0.0002
        CHECK(compute_cost_e4({70, 0}, rate) == 4);   // 0.00350 -> 0.0004
        CHECK(compute_cost_e4({90, 0}, rate) == 4);   // 0.00450 -> 0.0004
    }
    SUBCASE("formatting round-trips") {
        CHECK(format_usd_e4(4155) == "0.4155");
        CHECK(format_usd_e4(51230000) == "5123.0000");
        CHECK(format_usd_e4(90) == "0.0090");
        CHECK(parse_usd_e4("0.4155") == 4155);
        CHECK(parse_usd_e4("5123.0000") == 51230000);
        CHECK(parse_usd_e4("12.5") == 125000);
        for (std::int64_t v : {0LL, 1LL, 90LL, 4155LL, 51230000LL, 123456789LL})
            CHECK(parse_usd_e4(format_usd_e4(v)) == v);
    }
    SUBCASE("additivity is exact when per-entry amounts land on the grid") {
        std::mt19937 rng(7);
        std::uniform_int_distribution<std::int64_t> d(1, 100000);
        wire::TokenUsage total;
        std::int64_t summed = 0;
        for (int i = 0; i < 500; ++i) {
            // rate 5: cost_e4 = tokens/20, exact whenever tokens % 20 == 0
            wire::TokenUsage u{d(rng) * 20, d(rng) * 20};
            total.input_tokens += u.input_tokens;
            total.output_tokens += u.output_tokens;
            summed += compute_cost_e4(u, rate);
        }
        CHECK(summed == compute_cost_e4(total, rate));
    }
    SUBCASE("additivity error stays within half a unit per entry otherwise") {
        std::mt19937 rng(11);
        std::uniform_int_distribution<std::int64_t> d(1, 99999);
        wire::TokenUsage total;
        std::int64_t summed = 0;
        const int n = 1000;
        for (int i = 0; i < n; ++i) {
            wire::TokenUsage u{d(rng), d(rng)};
            total.input_tokens += u.input_tokens;
            total.output_tokens += u.output_tokens;
            summed += compute_cost_e4(u, rate);
        }
        const std::int64_t exact = compute_cost_e4(total, rate);
        CHECK(std::abs(summed - exact) <= n / 2 + 1);
    }
}

TEST_CASE("ledger round-trips and survives concurrent appenders") {
    const std::string path = temp_path("ledger") + ".jsonl";
    {
        LedgerWriter writer(path);
        LedgerEntry e;
        e.timestamp = "2026-01-05T14:03:22.000Z";
        e.scaffold_id = "claude";
        e.session_id = "claude/dynastic";
        e.challenge_id = "dynastic";
        e.dialect = "anthropic-messages";
        e.model_id = "alias2-mini";
        e.input_tokens = 71800;
        e.output_tokens = 11300;
        e.cost_e4 = 4155;
        e.latency_ms = 1200;
        writer.append(e);

        constexpr int kThreads = 8;
        constexpr int kEach = 50;
        std::vector<std::thread> threads;
        for (int t = 0; t < kThreads; ++t)
            threads.emplace_back([&writer, t] {
                for (int i = 0; i < kEach; ++i) {
                    LedgerEntry x;
                    x.timestamp = "2026-01-05T14:03:23.000Z";
                    x.scaffold_id = "w" + std::to_string(t);
                    x.input_tokens = i;
                    writer.append(x);
                }
            });
        for (auto& t : threads) t.join();

        const auto entries = read_ledger(path);
        REQUIRE(entries.size() == 1 + kThreads * kEach);
        CHECK(entries[0].scaffold_id == "claude");
        CHECK(entries[0].cost_e4 == 4155);
        CHECK(entries[0].to_json()["cost_usd"] == "0.4155");
        CHECK_FALSE(entries[0].blocked);
    }
    fs::remove(path);
}

TEST_CASE("route classification is a strict whitelist") {
    RouteTable t = make_table("claude", 1);
    t.routes.push_back({"/v1/messages/batches", wire::Dialect::AnthropicMessages,
                        wire::Dialect::OpenAiChatCompletions, "127.0.0.1", 1, "/x"});

    CHECK(classify(t, "/v1/messages").kind == RouteKind::Api);
    CHECK(classify(t, "/v1/messages?beta=true").kind == RouteKind::Api);
    CHECK(classify(t, "/telemetry/events").kind == RouteKind::Blocked);
    CHECK(classify(t, "/v1/telemetry").kind == RouteKind::Blocked);
    CHECK(classify(t, "").kind == RouteKind::Blocked);
    CHECK(classify(t, "/").kind == RouteKind::Blocked);
    CHECK(classify(t, "/v1/messagesque").kind == RouteKind::Blocked);
    // Longest prefix wins.
    const RouteDecision d = classify(t, "/v1/messages/batches/7");
    REQUIRE(d.kind == RouteKind::Api);
    CHECK(d.route->path_prefix == "/v1/messages/batches");

    RouteTable dup = make_table("x", 1);
    dup.routes.push_back(dup.routes[0]);
    CHECK_THROWS_AS(dup.check(), std::invalid_argument);
}

TEST_CASE("proxy forwards, translates, meters, and swallows telemetry") {
    StubUpstream upstream;
    upstream.next_response = cc_response(1500, 300);
    upstream.start();

    auto clock = std::make_shared<ManualClock>(1767621802000); // fixed base time
    const std::string ledger_path = temp_path("proxy-ledger") + ".jsonl";
    auto ledger = std::make_shared<LedgerWriter>(ledger_path);
    FixedHook hook;

    ProxyServer proxy(make_table("claude", upstream.port), ledger, clock, &hook);
    const int port = proxy.start();

    httplib::Client client("127.0.0.1", port);

    SUBCASE("api route: anthropic in, chat-completions up, anthropic back") {
        const auto res = client.Post("/v1/messages", anthropic_request("hi").dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == 200);
        const json body = json::parse(res->body);
        CHECK(body["type"] == "message");
        CHECK(body["content"][0]["text"] == "ack");
        CHECK(body["usage"]["input_tokens"] == 1500);
        CHECK(upstream.hits == 1);
        CHECK(upstream.captured()["messages"][0]["content"] == "hi");

        proxy.stop();
        const auto entries = read_ledger(ledger_path);
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].scaffold_id == "claude");
        CHECK(entries[0].dialect == "anthropic-messages");
        CHECK(entries[0].model_id == "alias2-mini");
        CHECK(entries[0].input_tokens == 1500);
        CHECK(entries[0].output_tokens == 300);
        CHECK(entries[0].cost_e4 == 90); // $0.0090 at $5/M
        CHECK_FALSE(entries[0].blocked);
        CHECK(entries[0].warning.empty());
    }

    SUBCASE("telemetry is blocked with 200/empty and a zero-cost ledger row") {
        const auto res = client.Post("/telemetry/events", R"({"spans":[1,2,3]})", "application/json");
        REQUIRE(res);
        CHECK(res->status == 200);
        CHECK(res->body.empty());
        const auto res2 = client.Get("/metrics");
        REQUIRE(res2);
        CHECK(res2->status == 200);
        CHECK(upstream.hits == 0); // nothing leaked upstream

        proxy.stop();
        const auto entries = read_ledger(ledger_path);
        REQUIRE(entries.size() == 2);
        for (const auto& e : entries) {
            CHECK(e.blocked);
            CHECK(e.cost_e4 == 0);
            CHECK(e.input_tokens == 0);
        }
    }

    SUBCASE("session attribution comes from headers") {
        httplib::Headers headers{{"x-csi-session", "claude/dynastic"}, {"x-csi-challenge", "dynastic"}};
        const auto res = client.Post("/v1/messages", headers, anthropic_request("go").dump(),
                                     "application/json");
        REQUIRE(res);
        proxy.stop();
        const auto entries = read_ledger(ledger_path);
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].session_id == "claude/dynastic");
        CHECK(entries[0].challenge_id == "dynastic");
    }

    SUBCASE("injected directive rides as a trailing user message") {
        hook.text = "Cooperation directive: run tail -n +1 /blackboard/notes.md";
        const auto res = client.Post("/v1/messages", anthropic_request("hi").dump(), "application/json");
        REQUIRE(res);
        const json seen = upstream.captured();
        REQUIRE(seen["messages"].size() == 2);
        CHECK(seen["messages"][1]["role"] == "user");
        CHECK(seen["messages"][1]["content"] == *hook.text);
    }

    SUBCASE("cross-dialect extras are dropped with a ledger warning") {
        json body = anthropic_request("hi");
        body["metadata"] = {{"user_id", "op-1"}};
        const auto res = client.Post("/v1/messages", body.dump(), "application/json");
        REQUIRE(res);
        CHECK_FALSE(upstream.captured().contains("metadata"));
        proxy.stop();
        const auto entries = read_ledger(ledger_path);
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].warning == "extras-dropped");
    }

    SUBCASE("missing upstream usage is recorded as zero with a flag") {
        upstream.next_response.erase("usage");
        const auto res = client.Post("/v1/messages", anthropic_request("hi").dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == 200);
        proxy.stop();
        const auto entries = read_ledger(ledger_path);
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].input_tokens == 0);
        CHECK(entries[0].cost_e4 == 0);
        CHECK(entries[0].warning == "missing-usage");
    }

    SUBCASE("malformed inbound body yields a dialect-shaped 400") {
        const auto res = client.Post("/v1/messages", "{\"model\":\"m\"}", "application/json");
        REQUIRE(res);
        CHECK(res->status == 400);
        const json body = json::parse(res->body);
        CHECK(body["type"] == "error");
        CHECK(upstream.hits == 0);
    }

    proxy.stop();
    ledger.reset();
    fs::remove(ledger_path);
}

TEST_CASE("unreachable upstream produces a dialect-shaped error and a warned entry") {
    auto clock = std::make_shared<ManualClock>(0);
    const std::string ledger_path = temp_path("proxy-dead") + ".jsonl";
    auto ledger = std::make_shared<LedgerWriter>(ledger_path);

    // Bind an ephemeral port without listening, then free it: connects to it
    // are refused instantly.
    int dead_port = 0;
    {
        const int sock = ::socket(AF_INET, SOCK_STREAM, 0);
        REQUIRE(sock >= 0);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = 0;
        REQUIRE(::bind(sock, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
        socklen_t len = sizeof(addr);
        REQUIRE(::getsockname(sock, reinterpret_cast<sockaddr*>(&addr), &len) == 0);
        dead_port = ntohs(addr.sin_port);
        ::close(sock);
    }

    ProxyServer proxy(make_table("codex", dead_port), ledger, clock, nullptr);
    const int port = proxy.start();
    httplib::Client client("127.0.0.1", port);

    const auto res = client.Post("/v1/messages", anthropic_request("hi").dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 502);
    CHECK(json::parse(res->body)["type"] == "error");

    proxy.stop();
    const auto entries = read_ledger(ledger_path);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].warning == "upstream-unreachable");
    CHECK(entries[0].cost_e4 == 0);
    ledger.reset();
    fs::remove(ledger_path);
}

TEST_CASE("concurrent in-flight requests all land in the ledger") {
    StubUpstream upstream;
    upstream.next_response = cc_response(20, 20);
    upstream.start();

    auto clock = std::make_shared<ManualClock>(0);
    const std::string ledger_path = temp_path("proxy-conc") + ".jsonl";
    auto ledger = std::make_shared<LedgerWriter>(ledger_path);
    ProxyServer proxy(make_table("gcai", upstream.port), ledger, clock, nullptr);
    const int port = proxy.start();

    constexpr int kThreads = 8;
    constexpr int kEach = 10;
    std::vector<std::thread> threads;
    std::atomic<int> ok{0};
    for (int t = 0; t < kThreads; ++t)
        threads.emplace_back([&, t] {
            httplib::Client c("127.0.0.1", port);
            for (int i = 0; i < kEach; ++i) {
                const auto res =
                    c.Post("/v1/messages", anthropic_request("t" + std::to_string(t)).dump(),
                           "application/json");
                if (res && res->status == 200) ++ok;
            }
        });
    for (auto& t : threads) t.join();
    proxy.stop();

    CHECK(ok == kThreads * kEach);
    const auto entries = read_ledger(ledger_path);
    CHECK(entries.size() == kThreads * kEach);
    std::int64_t total_e4 = 0;
    for (const auto& e : entries) total_e4 += e.cost_e4;
    CHECK(total_e4 == kThreads * kEach * 2); // 40 tokens each -> 0.0002
    ledger.reset();
    fs::remove(ledger_path);
}
