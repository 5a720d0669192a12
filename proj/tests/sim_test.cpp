#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "csi/blackboard/engine.hpp"
#include "csi/orch/campaign.hpp"
#include "csi/orch/record.hpp"
#include "csi/proxy/cost.hpp"
#include "csi/proxy/ledger.hpp"
#include "csi/sim/fleet.hpp"
#include "csi/sim/script.hpp"
#include "csi/sim/upstream.hpp"

using namespace csi;
namespace fs = std::filesystem;

namespace {

std::string temp_root(const std::string& tag) {
    auto path = fs::temp_directory_path() /
                ("csi-sim-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

orch::Challenge make_challenge(const std::string& name, double minutes) {
    orch::Challenge c;
    c.name = name;
    c.category = "crypto";
    c.tier = "easy";
    c.est_time_minutes = minutes;
    c.flag_pattern = "HTB\\{[A-Za-z0-9_]{1,200}\\}";
    c.literal_flag = "HTB{" + name + "_flag}";
    c.entry_command = "python3 server.py";
    c.known_flag_paths = {"/usr/src/app/flag.txt", "/challenge/flag.txt"};
    return c;
}

} // namespace

TEST_CASE("usage markers round-trip through the upstream echo") {
    CHECK(sim::usage_marker(2000, 300) == "[[usage:2000,300]]");
    auto parsed = sim::parse_usage_marker("preamble [[usage:10,2]] then [[usage:2000,300]] end");
    REQUIRE(parsed.has_value());
    CHECK(parsed->first == 2000); // the last marker wins
    CHECK(parsed->second == 300);
    CHECK_FALSE(sim::parse_usage_marker("no marker here").has_value());
    CHECK_FALSE(sim::parse_usage_marker("[[usage:broken]]").has_value());

    sim::UpstreamStub upstream;
    const int port = upstream.start();
    httplib::Client client("127.0.0.1", port);
    nlohmann::json body{
        {"model", "alias1-mini"},
        {"messages", nlohmann::json::array(
                         {{{"role", "user"}, {"content", "hello [[usage:120,44]]"}}})}};
    auto res = client.Post("/v1/chat/completions", body.dump(), "application/json");
    REQUIRE(res);
    REQUIRE(res->status == 200);
    auto reply = nlohmann::json::parse(res->body);
    CHECK(reply["choices"][0]["message"]["content"] == "echo: hello [[usage:120,44]]");
    CHECK(reply["usage"]["prompt_tokens"] == 120);
    CHECK(reply["usage"]["completion_tokens"] == 44);
    CHECK(upstream.request_count() == 1);
}

TEST_CASE("script sets round-trip through JSON") {
    sim::ScriptSet set;
    sim::AgentScript agent;
    agent.scaffold = "claude";
    agent.dialect = wire::Dialect::AnthropicMessages;
    agent.model = "alias1";
    agent.role_policy.role = blackboard::Role::Writer;
    sim::ChallengePlan plan;
    plan.solve = true;
    plan.solve_turn = 4;
    plan.elapsed_s = 543.2;
    plan.usage.input_start = 9000;
    plan.usage.reset_every = 3;
    plan.reads = true;
    plan.writes = true;
    plan.posts = 5;
    plan.error_turns = {2, 3};
    agent.challenges["dynastic"] = plan;
    set.agents.push_back(agent);

    auto round = sim::ScriptSet::from_json(set.to_json());
    REQUIRE(round.agents.size() == 1);
    const auto* found = round.find("claude");
    REQUIRE(found != nullptr);
    CHECK(found->dialect == wire::Dialect::AnthropicMessages);
    CHECK(found->role_policy.role == blackboard::Role::Writer);
    auto got = found->plan_for("dynastic");
    CHECK(got.solve);
    CHECK(got.solve_turn == 4);
    CHECK(got.elapsed_s == 543.2);
    CHECK(got.usage.input_start == 9000);
    CHECK(got.usage.reset_every == 3);
    CHECK(got.error_turns == std::vector<int>{2, 3});
    CHECK_FALSE(found->plan_for("unlisted").solve); // absent challenges idle
    CHECK(round.find("nobody") == nullptr);

    sim::UsageModel sawtooth;
    sawtooth.input_start = 100;
    sawtooth.input_step = 10;
    sawtooth.reset_every = 3;
    CHECK(sawtooth.at(0).input_tokens == 100);
    CHECK(sawtooth.at(2).input_tokens == 120);
    CHECK(sawtooth.at(3).input_tokens == 100); // context reset
    sim::UsageModel pinned;
    pinned.points = {{7192, 500}, {7500, 600}};
    CHECK(pinned.at(0).input_tokens == 7192);
    CHECK(pinned.at(5).input_tokens == 7500); // clamps to the last point
}

TEST_CASE("independent campaign end to end: flags, ledger attribution, dialects") {
    const std::string root = temp_root("independent");
    auto clock = std::make_shared<ManualClock>(1756000000000);
    sim::Fleet fleet(root + "/ledger.jsonl", clock);

    std::vector<orch::ScaffoldSpec> specs(2);
    specs[0].id = "claude";
    specs[0].dialect = wire::Dialect::AnthropicMessages;
    specs[0].model_id = "alias1";
    specs[1].id = "codex";
    specs[1].dialect = wire::Dialect::OpenAiResponses;
    specs[1].model_id = "alias2-mini";
    fleet.add_scaffolds(specs);

    sim::ScriptSet scripts;
    {
        sim::AgentScript a;
        a.scaffold = "claude";
        a.dialect = specs[0].dialect;
        a.model = "alias1";
        sim::ChallengePlan p;
        p.solve = true;
        p.solve_turn = 3;
        p.elapsed_s = 120;
        p.usage.input_start = 2000;
        p.usage.input_step = 500;
        p.usage.output_per_turn = 300;
        p.error_turns = {2};
        a.challenges["dynastic"] = p;
        scripts.agents.push_back(a);
    }
    {
        sim::AgentScript a;
        a.scaffold = "codex";
        a.dialect = specs[1].dialect;
        a.model = "alias2-mini";
        sim::ChallengePlan p;
        p.solve = false;
        p.turn_seconds = 100;
        a.challenges["dynastic"] = p;
        scripts.agents.push_back(a);
    }

    auto challenge = make_challenge("dynastic", 5);
    orch::RunnerServices services;
    services.clock = clock;
    services.factory = fleet.factory(scripts);
    services.ledger_path = fleet.ledger_path();
    services.work_dir = root + "/work";

    auto records = orch::run_challenge(orch::CampaignMode::Independent, challenge, specs, services);
    REQUIRE(records.size() == 2);
    const auto& solver = records[0];
    const auto& idler = records[1];

    CHECK(solver.solved);
    CHECK(solver.flag == challenge.literal_flag);
    CHECK(solver.duration_s == 120.0);
    CHECK(solver.turns == 3);
    // Commands: launch + denied metadata read on turn 1, a failing command
    // on turn 2, recon on turns 1-2, the unlock walk on turn 3.
    CHECK(solver.errors == 2); // metadata denial + scripted failure
    CHECK(solver.commands ==
          2 + 2 /* recon */ + 1 /* false */ +
              static_cast<std::int64_t>(sim::unlock_sequence("dynastic").size()));

    CHECK_FALSE(idler.solved);
    CHECK(idler.duration_s == 300.0); // rode out the 5-minute budget
    CHECK(idler.turns == 3);          // turns at 100/200/300s

    // Ledger rows carry per-scaffold dialects and session attribution, and
    // the scripted usage model lands in the reconciled totals.
    auto ledger = proxy::read_ledger(fleet.ledger_path());
    std::int64_t claude_api = 0;
    std::int64_t blocked = 0;
    for (const auto& e : ledger) {
        if (e.blocked) {
            ++blocked;
            CHECK_FALSE(e.session_id.empty());
            continue;
        }
        if (e.scaffold_id == "claude") {
            ++claude_api;
            CHECK(e.dialect == "anthropic-messages");
            CHECK(e.model_id == "alias1");
        } else {
            CHECK(e.dialect == "openai-responses");
            CHECK(e.model_id == "alias2-mini");
        }
        CHECK(e.latency_ms == 0); // virtual time does not advance inside a call
    }
    CHECK(claude_api == 3);
    CHECK(blocked == 2); // one swallowed telemetry POST per session

    CHECK(solver.input_tokens == 2000 + 2500 + 3000);
    CHECK(solver.output_tokens == 3 * 300);
    const std::int64_t expected_cost =
        proxy::compute_cost_e4({2000, 300}, {}) + proxy::compute_cost_e4({2500, 300}, {}) +
        proxy::compute_cost_e4({3000, 300}, {});
    CHECK(solver.cost_e4 == expected_cost);
    CHECK(idler.input_tokens == 3 * 2000 + 500 + 1000);

    fs::remove_all(root);
}

TEST_CASE("blackboard campaign: directives flow and compliance lands on the board") {
    const std::string root = temp_root("blackboard");
    auto clock = std::make_shared<ManualClock>(1756000000000);
    blackboard::InjectionEngine engine(clock);
    sim::Fleet fleet(root + "/ledger.jsonl", clock, &engine);

    std::vector<orch::ScaffoldSpec> specs(3);
    specs[0].id = "scribe";
    specs[0].dialect = wire::Dialect::OpenAiChatCompletions;
    specs[0].role_policy.role = blackboard::Role::Writer;
    specs[1].id = "lurker";
    specs[1].dialect = wire::Dialect::OpenAiChatCompletions;
    specs[1].role_policy.role = blackboard::Role::Reader;
    specs[2].id = "solo";
    specs[2].dialect = wire::Dialect::MistralFunctionCalling;
    specs[2].role_policy.role = blackboard::Role::None;
    fleet.add_scaffolds(specs);

    sim::ScriptSet scripts;
    {
        sim::AgentScript a;
        a.scaffold = "scribe";
        sim::ChallengePlan p;
        p.solve = true;
        p.solve_turn = 5;
        p.elapsed_s = 300;
        p.reads = true;
        p.writes = true;
        p.posts = 2;
        a.challenges["glacier"] = p;
        scripts.agents.push_back(a);
    }
    {
        sim::AgentScript a;
        a.scaffold = "lurker";
        sim::ChallengePlan p;
        p.turn_seconds = 120;
        p.reads = true;
        a.challenges["glacier"] = p;
        scripts.agents.push_back(a);
    }
    {
        sim::AgentScript a;
        a.scaffold = "solo";
        sim::ChallengePlan p;
        p.turn_seconds = 120;
        p.reads = true; // willing, but its role never receives a directive
        a.challenges["glacier"] = p;
        scripts.agents.push_back(a);
    }

    auto challenge = make_challenge("glacier", 10);
    orch::RunnerServices services;
    services.clock = clock;
    services.factory = fleet.factory(scripts);
    services.ledger_path = fleet.ledger_path();
    services.engine = &engine;
    services.work_dir = root + "/work";

    auto records =
        orch::run_challenge(orch::CampaignMode::Blackboard, challenge, specs, services);
    REQUIRE(records.size() == 3);
    CHECK(records[0].solved);
    CHECK(records[0].winner);
    CHECK(records[0].duration_s == 300.0);
    CHECK_FALSE(records[1].solved);
    CHECK_FALSE(records[2].solved);
    // Losers were cut at the winner's flag + the 5s grace window: their next
    // poll after 300s would have been 360s.
    CHECK(records[1].duration_s == 305.0);
    CHECK(records[2].duration_s == 305.0);

    // Directive accounting: participating roles got their first-request
    // directive; the none role got none.
    CHECK(records[0].injections == 1);
    CHECK(records[1].injections == 1);
    CHECK(records[2].injections == 0);

    // Compliance landed on the board: the writer's post is on the notes
    // file, and the sidecar has the reader's delta read.
    const std::string board = services.work_dir + "/glacier/blackboard/notes.md";
    const std::string notes = slurp(board);
    CHECK(notes.find("## [scribe]") != std::string::npos);
    CHECK(notes.find("[hypothesis]") != std::string::npos);

    bool scribe_wrote = false;
    bool lurker_read = false;
    bool solo_touched = false;
    for (const auto& ev : blackboard::read_activity_log(board + ".events.jsonl")) {
        if (ev.scaffold == "scribe" && ev.event == "write") scribe_wrote = true;
        if (ev.scaffold == "lurker" && ev.event == "read") lurker_read = true;
        if (ev.scaffold == "solo") solo_touched = true;
    }
    CHECK(scribe_wrote);
    CHECK(lurker_read);
    CHECK_FALSE(solo_touched);

    fs::remove_all(root);
}

TEST_CASE("race through the fleet: one winner, verified flag, grace clamp") {
    const std::string root = temp_root("race");
    auto clock = std::make_shared<ManualClock>(1756000000000);
    sim::Fleet fleet(root + "/ledger.jsonl", clock);

    std::vector<orch::ScaffoldSpec> specs(2);
    specs[0].id = "hare";
    specs[0].dialect = wire::Dialect::OpenAiChatCompletions;
    specs[1].id = "tortoise";
    specs[1].dialect = wire::Dialect::AnthropicMessages;
    fleet.add_scaffolds(specs);

    sim::ScriptSet scripts;
    for (const auto& [id, elapsed] :
         std::vector<std::pair<std::string, double>>{{"hare", 120}, {"tortoise", 180}}) {
        sim::AgentScript a;
        a.scaffold = id;
        sim::ChallengePlan p;
        p.solve = true;
        p.solve_turn = 3;
        p.elapsed_s = elapsed;
        a.challenges["packed"] = p;
        scripts.agents.push_back(a);
    }

    auto challenge = make_challenge("packed", 10);
    orch::RunnerServices services;
    services.clock = clock;
    services.factory = fleet.factory(scripts);
    services.ledger_path = fleet.ledger_path();
    services.work_dir = root + "/work";

    auto records = orch::run_challenge(orch::CampaignMode::Race, challenge, specs, services);
    REQUIRE(records.size() == 2);
    int winners = 0;
    for (const auto& r : records) winners += r.winner ? 1 : 0;
    CHECK(winners == 1);
    CHECK(records[0].winner);
    CHECK(records[0].duration_s == 120.0);
    CHECK(records[0].flag == challenge.literal_flag);
    CHECK_FALSE(records[1].solved);
    CHECK(records[1].flag.empty());
    CHECK(records[1].duration_s == 125.0); // cut at winner + grace
    fs::remove_all(root);
}

TEST_CASE("identical seeds and scripts reproduce campaigns byte for byte") {
    auto run_once = [](const std::string& root) {
        auto clock = std::make_shared<ManualClock>(1756000000000);
        blackboard::InjectionEngine engine(clock);
        sim::Fleet fleet(root + "/ledger.jsonl", clock, &engine);

        std::vector<orch::ScaffoldSpec> specs(2);
        specs[0].id = "scribe";
        specs[0].dialect = wire::Dialect::AnthropicMessages;
        specs[0].role_policy.role = blackboard::Role::Writer;
        specs[1].id = "lurker";
        specs[1].dialect = wire::Dialect::OpenAiResponses;
        specs[1].role_policy.role = blackboard::Role::Reader;
        fleet.add_scaffolds(specs);

        sim::ScriptSet scripts;
        {
            sim::AgentScript a;
            a.scaffold = "scribe";
            a.dialect = specs[0].dialect;
            sim::ChallengePlan p;
            p.solve = true;
            p.solve_turn = 4;
            p.elapsed_s = 240;
            p.reads = true;
            p.writes = true;
            p.posts = 1;
            a.challenges["umbra"] = p;
            scripts.agents.push_back(a);
        }
        {
            sim::AgentScript a;
            a.scaffold = "lurker";
            a.dialect = specs[1].dialect;
            sim::ChallengePlan p;
            p.turn_seconds = 90;
            p.reads = true;
            a.challenges["umbra"] = p;
            scripts.agents.push_back(a);
        }

        auto challenge = make_challenge("umbra", 8);
        orch::RunnerServices services;
        services.clock = clock;
        services.factory = fleet.factory(scripts);
        services.ledger_path = fleet.ledger_path();
        services.engine = &engine;
        services.work_dir = root + "/work";
        orch::RecordWriter writer(root + "/records.jsonl");
        orch::run_challenge(orch::CampaignMode::Blackboard, challenge, specs, services, &writer);
    };

    const std::string a = temp_root("det-a");
    const std::string b = temp_root("det-b");
    run_once(a);
    run_once(b);

    CHECK(slurp(a + "/ledger.jsonl") == slurp(b + "/ledger.jsonl"));
    CHECK(slurp(a + "/records.jsonl") == slurp(b + "/records.jsonl"));
    CHECK(slurp(a + "/work/umbra/blackboard/notes.md") ==
          slurp(b + "/work/umbra/blackboard/notes.md"));
    CHECK(slurp(a + "/work/umbra/blackboard/notes.md.events.jsonl") ==
          slurp(b + "/work/umbra/blackboard/notes.md.events.jsonl"));
    CHECK_FALSE(slurp(a + "/ledger.jsonl").empty());

    fs::remove_all(a);
    fs::remove_all(b);
}
