// csi: one executable for the routing proxy, campaign runs, aggregation,
// report rendering, and the scaffold-evolution loop.
//
// Exit codes: 0 success, 2 configuration error, 3 environment error,
// 4 campaign failure.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csi/analytics/report.hpp"
#include "csi/analytics/rollup.hpp"
#include "csi/analytics/solve_matrix.hpp"
#include "csi/blackboard/engine.hpp"
#include "csi/clock.hpp"
#include "csi/evolve/loop.hpp"
#include "csi/orch/campaign.hpp"
#include "csi/orch/environment.hpp"
#include "csi/orch/record.hpp"
#include "csi/proxy/cost.hpp"
#include "csi/proxy/ledger.hpp"
#include "csi/proxy/route_table.hpp"
#include "csi/proxy/server.hpp"
#include "csi/sim/fleet.hpp"
#include "csi/sim/generate.hpp"
#include "csi/sim/script.hpp"
#include "csi/wire/dialect.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace csi;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitEnvironment = 3;
constexpr int kExitCampaign = 4;

struct CliError : std::runtime_error {
    int code;
    CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

json load_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw CliError(kExitConfig, std::string("cannot open ") + what + ": " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw CliError(kExitConfig, std::string("bad JSON in ") + path + ": " + e.what());
    }
}

void require_file(const std::string& path, const char* what) {
    if (!fs::exists(path))
        throw CliError(kExitConfig, std::string("missing ") + what + ": " + path);
}

/// Fill unset options of `sub` from the flat JSON config document. CLI flags
/// always win; config supplies the rest.
void apply_config(CLI::App* sub, const std::string& config_path) {
    if (config_path.empty()) return;
    const json cfg = load_json_file(config_path, "config");
    if (!cfg.is_object())
        throw CliError(kExitConfig, "config must be a flat JSON object: " + config_path);
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) continue;
        std::vector<std::string> words;
        if (value.is_array())
            for (const auto& item : value) words.push_back(item.get<std::string>());
        else if (value.is_string())
            words.push_back(value.get<std::string>());
        else if (value.is_boolean())
            words.push_back(value.get<bool>() ? "true" : "false");
        else
            words.push_back(value.dump());
        try {
            opt->add_result(words.front());
            for (size_t i = 1; i < words.size(); ++i) opt->add_result(words[i]);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw CliError(kExitConfig,
                           "config key '" + key + "': " + std::string(e.what()));
        }
    }
}

struct OutputDir {
    std::string dir;
    bool normalize_timestamps = false;
    json inputs = json::object();
    std::vector<std::string> outputs;

    void ensure() const { fs::create_directories(dir); }

    std::string claim(const std::string& leaf) {
        const std::string path = (fs::path(dir) / leaf).string();
        outputs.push_back(path);
        return path;
    }

    void write_manifest(const std::string& subcommand) {
        ensure();
        json m;
        m["tool"] = "csi";
        m["subcommand"] = subcommand;
        m["created"] = normalize_timestamps ? rfc3339_utc(0) : rfc3339_utc([] {
            SystemClock wall;
            return wall.now_ms();
        }());
        m["inputs"] = inputs;
        m["outputs"] = outputs;
        std::ofstream out(fs::path(dir) / "manifest.json", std::ios::trunc);
        out << m.dump(2) << "\n";
    }
};

void write_text(const std::string& path, const std::string& content) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw CliError(kExitEnvironment, "cannot write " + path);
    out << content;
}

std::vector<std::string> scaffold_order_of(const std::vector<orch::RunRecord>& records) {
    std::vector<std::string> order;
    for (const auto& r : records)
        if (std::find(order.begin(), order.end(), r.scaffold) == order.end())
            order.push_back(r.scaffold);
    return order;
}

std::vector<std::string> board_files_under(const std::string& work_dir) {
    std::vector<std::string> files;
    if (work_dir.empty() || !fs::exists(work_dir)) return files;
    for (const auto& entry : fs::recursive_directory_iterator(work_dir))
        if (entry.is_regular_file() && entry.path().filename() == "notes.md")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

// ---- proxy -----------------------------------------------------------------

struct ProxyArgs {
    std::string scaffold = "proxy";
    std::string inbound = "openai-chat-completions";
    std::string upstream_dialect = "openai-chat-completions";
    std::string listen_host = "127.0.0.1";
    int listen_port = 0;
    std::string path_prefix;
    std::string upstream_host = "127.0.0.1";
    int upstream_port = 0;
    std::string upstream_path = "/v1/chat/completions";
    std::string ledger;
    double rate = 5.0;
    bool check_only = false;
};

int cmd_proxy(const ProxyArgs& a, OutputDir& out) {
    proxy::RouteTable table;
    table.scaffold_id = a.scaffold;
    table.listen_host = a.listen_host;
    table.listen_port = a.listen_port;
    proxy::Route route;
    try {
        route.inbound = wire::dialect_from_string(a.inbound);
        route.upstream = wire::dialect_from_string(a.upstream_dialect);
    } catch (const std::exception& e) {
        throw CliError(kExitConfig, e.what());
    }
    route.path_prefix = a.path_prefix.empty() ? wire::default_api_path(route.inbound)
                                              : a.path_prefix;
    route.upstream_host = a.upstream_host;
    route.upstream_port = a.upstream_port;
    route.upstream_path = a.upstream_path;
    table.routes.push_back(route);

    const std::string ledger_path =
        a.ledger.empty() ? (fs::path(out.dir) / "ledger.jsonl").string() : a.ledger;
    out.inputs["scaffold"] = a.scaffold;
    out.inputs["route"] = {{"path_prefix", route.path_prefix},
                           {"inbound", std::string(wire::to_string(route.inbound))},
                           {"upstream", a.upstream_host + ":" + std::to_string(a.upstream_port) +
                                            a.upstream_path}};

    if (a.check_only) {
        json resolved;
        resolved["scaffold"] = table.scaffold_id;
        resolved["listen"] = table.listen_host + ":" + std::to_string(table.listen_port);
        resolved["ledger"] = ledger_path;
        resolved["routes"] = json::array();
        for (const auto& r : table.routes)
            resolved["routes"].push_back(
                {{"path_prefix", r.path_prefix},
                 {"inbound", std::string(wire::to_string(r.inbound))},
                 {"upstream_dialect", std::string(wire::to_string(r.upstream))},
                 {"upstream_host", r.upstream_host},
                 {"upstream_port", r.upstream_port},
                 {"upstream_path", r.upstream_path}});
        std::cout << resolved.dump(2) << "\n";
        out.write_manifest("proxy");
        return 0;
    }

    if (a.upstream_port <= 0)
        throw CliError(kExitConfig, "serving requires --upstream-port");
    out.ensure();
    auto clock = std::make_shared<SystemClock>();
    auto writer = std::make_shared<proxy::LedgerWriter>(ledger_path);
    out.outputs.push_back(ledger_path);
    proxy::CostRate rate{a.rate};
    proxy::ProxyServer server(table, writer, clock, nullptr, rate);
    server.start();
    std::cout << "proxy for " << table.scaffold_id << " listening on " << table.listen_host
              << ":" << server.port() << ", ledger at " << ledger_path << "\n";
    out.write_manifest("proxy");

    sigset_t wait_on;
    sigemptyset(&wait_on);
    sigaddset(&wait_on, SIGINT);
    sigaddset(&wait_on, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &wait_on, nullptr);
    int sig = 0;
    sigwait(&wait_on, &sig);
    server.stop();
    std::cout << "proxy stopped\n";
    return 0;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
    std::string mode = "independent";
    std::string suite;
    std::string scripts;
    std::int64_t epoch_ms = 1756000000000;
    unsigned seed = 1;
    std::int64_t grace_ms = 5000;
    std::int64_t recency_min = 10;
};

int cmd_run(const RunArgs& a, OutputDir& out) {
    require_file(a.suite, "suite manifest");
    require_file(a.scripts, "script set");
    orch::CampaignMode mode;
    try {
        mode = orch::campaign_mode_from_string(a.mode);
    } catch (const std::exception& e) {
        throw CliError(kExitConfig, e.what());
    }
    const auto suite = orch::SuiteManifest::load(a.suite);
    const auto scripts = sim::ScriptSet::load(a.scripts);
    if (scripts.agents.empty())
        throw CliError(kExitConfig, "script set has no agents: " + a.scripts);

    std::vector<orch::ScaffoldSpec> specs;
    for (const auto& agent : scripts.agents) {
        orch::ScaffoldSpec spec;
        spec.id = agent.scaffold;
        spec.dialect = agent.dialect;
        spec.model_id = agent.model;
        spec.role_policy = agent.role_policy;
        specs.push_back(spec);
    }

    // CSI_BACKEND narrows the fleet to one scaffold by backend tag.
    const char* backend = std::getenv("CSI_BACKEND");
    if (backend != nullptr && *backend != '\0') {
        static const std::set<std::string> valid{"cc", "codex", "cai", "gcai"};
        if (valid.count(backend) == 0)
            throw CliError(kExitConfig, std::string("unknown CSI_BACKEND '") + backend +
                                            "'; valid backends: cc, codex, cai, gcai");
        std::vector<orch::ScaffoldSpec> picked;
        for (const auto& spec : specs)
            if (orch::backend_tag(spec.id) == backend) picked.push_back(spec);
        if (picked.empty())
            throw CliError(kExitConfig, std::string("no scaffold with backend tag '") +
                                            backend + "' in " + a.scripts);
        specs = std::move(picked);
    }

    out.ensure();
    auto clock = std::make_shared<ManualClock>(a.epoch_ms);
    std::optional<blackboard::InjectionEngine> engine;
    if (mode == orch::CampaignMode::Blackboard)
        engine.emplace(clock, a.recency_min * 60 * 1000);
    sim::Fleet fleet((fs::path(out.dir) / "ledger.jsonl").string(), clock,
                     engine ? &*engine : nullptr);
    fleet.add_scaffolds(specs);

    orch::RunnerServices services;
    services.clock = clock;
    services.factory = fleet.factory(scripts);
    services.ledger_path = fleet.ledger_path();
    services.engine = engine ? &*engine : nullptr;
    services.work_dir = out.claim("work");
    services.seed = a.seed;
    services.grace_ms = a.grace_ms;

    orch::RecordWriter writer(out.claim("records.jsonl"));
    out.outputs.push_back(fleet.ledger_path());
    out.inputs = {{"mode", a.mode},
                  {"suite", a.suite},
                  {"scripts", a.scripts},
                  {"scaffolds", json::array()},
                  {"seed", a.seed},
                  {"epoch_ms", a.epoch_ms}};
    for (const auto& spec : specs) out.inputs["scaffolds"].push_back(spec.id);
    if (backend != nullptr && *backend != '\0') out.inputs["backend"] = backend;

    std::vector<orch::RunRecord> records;
    try {
        records = orch::run_campaign(mode, suite, specs, services, &writer);
    } catch (const orch::EnvError& e) {
        throw CliError(kExitEnvironment, e.what());
    } catch (const std::exception& e) {
        throw CliError(kExitCampaign, std::string("campaign failed: ") + e.what());
    }

    std::map<std::string, int> solved;
    std::set<std::string> challenges_solved;
    for (const auto& spec : specs) solved[spec.id] = 0;
    for (const auto& r : records)
        if (r.solved) {
            ++solved[r.scaffold];
            challenges_solved.insert(r.challenge);
        }
    for (const auto& spec : specs)
        std::cout << spec.id << ": " << solved[spec.id] << "/" << suite.challenges.size()
                  << " solved\n";
    std::cout << a.mode << " campaign: " << challenges_solved.size() << "/"
              << suite.challenges.size() << " challenges solved, " << records.size()
              << " session records\n";
    out.write_manifest("run");
    return 0;
}

// ---- aggregate -------------------------------------------------------------

struct AggregateArgs {
    std::string records;
    std::string ledger;
    std::string suite;
};

int cmd_aggregate(const AggregateArgs& a, OutputDir& out) {
    require_file(a.records, "records file");
    const auto records = orch::read_records(a.records);
    std::vector<proxy::LedgerEntry> ledger;
    if (!a.ledger.empty()) {
        require_file(a.ledger, "ledger file");
        ledger = proxy::read_ledger(a.ledger);
    }
    orch::SuiteManifest suite;
    std::vector<std::string> challenge_order;
    if (!a.suite.empty()) {
        require_file(a.suite, "suite manifest");
        suite = orch::SuiteManifest::load(a.suite);
        for (const auto& ch : suite.challenges) challenge_order.push_back(ch.name);
    }

    const auto scaffolds = scaffold_order_of(records);
    const auto grid = analytics::SolveMatrix::from_records(records, scaffolds, challenge_order);
    write_text(out.claim("solves.csv"), grid.to_csv());

    json costs = json::object();
    std::map<std::string, std::int64_t> cost_e4;
    for (const auto& e : ledger)
        if (!e.blocked) cost_e4[e.scaffold_id] += e.cost_e4;
    if (ledger.empty())
        for (const auto& r : records) cost_e4[r.scaffold] += r.cost_e4;
    for (const auto& [scaffold, cents4] : cost_e4)
        costs[scaffold] = static_cast<double>(cents4) / 10000.0;
    write_text(out.claim("costs.json"), costs.dump(2) + "\n");

    const auto rows = analytics::rollup(records, ledger, suite);
    json summary = json::array();
    for (const auto& row : rows) {
        json r;
        r["scaffold"] = row.scaffold;
        r["attempted"] = row.attempted;
        r["solved"] = row.solved;
        r["solve_rate"] = row.solve_rate;
        r["wall_hours"] = row.wall_hours;
        r["cost_usd"] = proxy::format_usd_e4(row.cost_e4);
        if (row.cost_per_solve_usd) r["cost_per_solve_usd"] = *row.cost_per_solve_usd;
        r["commands"] = row.commands;
        r["errors"] = row.errors;
        r["input_tokens"] = row.input_tokens;
        r["output_tokens"] = row.output_tokens;
        summary.push_back(r);
    }
    write_text(out.claim("summary.json"), summary.dump(2) + "\n");

    out.inputs = {{"records", a.records}};
    if (!a.ledger.empty()) out.inputs["ledger"] = a.ledger;
    if (!a.suite.empty()) out.inputs["suite"] = a.suite;
    std::cout << "aggregated " << records.size() << " records into " << out.dir << "\n";
    out.write_manifest("aggregate");
    return 0;
}

// ---- report ----------------------------------------------------------------

struct ReportArgs {
    std::string solves;
    std::string costs;
    std::string records;
    std::string ledger;
    std::string suite;
    std::vector<std::string> boards;
    std::string board_dir;
    std::string format = "markdown";
};

int cmd_report(const ReportArgs& a, OutputDir& out) {
    if (a.solves.empty() && a.records.empty())
        throw CliError(kExitConfig, "report needs --solves and/or --records");
    analytics::ReportFormat format;
    try {
        format = analytics::report_format_from_string(a.format);
    } catch (const std::exception& e) {
        throw CliError(kExitConfig, e.what());
    }

    std::map<std::string, double> costs;
    if (!a.costs.empty()) {
        require_file(a.costs, "costs file");
        const json cost_doc = load_json_file(a.costs, "costs");
        for (const auto& [scaffold, usd] : cost_doc.items())
            costs[scaffold] = usd.get<double>();
    }

    std::vector<analytics::Document> docs;
    std::vector<orch::RunRecord> records;
    std::vector<proxy::LedgerEntry> ledger;

    if (!a.records.empty()) {
        require_file(a.records, "records file");
        records = orch::read_records(a.records);
        if (!a.ledger.empty()) {
            require_file(a.ledger, "ledger file");
            ledger = proxy::read_ledger(a.ledger);
        }
        orch::SuiteManifest suite;
        std::vector<std::string> challenge_order;
        if (!a.suite.empty()) {
            require_file(a.suite, "suite manifest");
            suite = orch::SuiteManifest::load(a.suite);
            for (const auto& ch : suite.challenges) challenge_order.push_back(ch.name);
        }
        auto boards = a.boards;
        for (const auto& f : board_files_under(a.board_dir)) boards.push_back(f);
        const auto scaffolds = scaffold_order_of(records);
        const auto run_docs =
            analytics::render_run_reports(records, ledger, suite, boards, scaffolds, format);
        docs.insert(docs.end(), run_docs.begin(), run_docs.end());

        if (a.solves.empty()) {
            // No explicit grid: derive one from the records so the set-level
            // documents are still emitted.
            const auto grid =
                analytics::SolveMatrix::from_records(records, scaffolds, challenge_order);
            auto derived_costs = costs;
            if (derived_costs.empty())
                for (const auto& e : ledger)
                    if (!e.blocked)
                        derived_costs[e.scaffold_id] +=
                            static_cast<double>(e.cost_e4) / 10000.0;
            const auto solve_docs = analytics::render_solve_reports(grid, derived_costs, format);
            docs.insert(docs.end(), solve_docs.begin(), solve_docs.end());
        }
        out.inputs["records"] = a.records;
    }

    if (!a.solves.empty()) {
        require_file(a.solves, "solve grid");
        std::ifstream in(a.solves);
        std::stringstream buf;
        buf << in.rdbuf();
        analytics::SolveMatrix grid;
        try {
            grid = analytics::SolveMatrix::from_csv(buf.str());
        } catch (const std::exception& e) {
            throw CliError(kExitConfig, std::string("bad solve grid: ") + e.what());
        }
        const auto solve_docs = analytics::render_solve_reports(grid, costs, format);
        docs.insert(docs.end(), solve_docs.begin(), solve_docs.end());
        out.inputs["solves"] = a.solves;
    }

    out.ensure();
    for (const auto& doc : docs) write_text(out.claim(doc.name), doc.content);
    if (records.empty() && a.solves.empty()) std::cout << "no data in " << a.records << "\n";
    std::cout << "wrote " << docs.size() << " documents to " << out.dir << "\n";
    out.inputs["format"] = a.format;
    out.write_manifest("report");
    return 0;
}

// ---- evolve ----------------------------------------------------------------

struct EvolveArgs {
    std::string trace;
    std::int64_t iterations = -1;
};

int cmd_evolve(const EvolveArgs& a, OutputDir& out) {
    require_file(a.trace, "evolution trace");
    const json doc = load_json_file(a.trace, "evolution trace");
    std::vector<std::vector<evolve::EvalOutcome>> evaluations;
    evolve::CandidateScore incumbent;
    std::string incumbent_id = "incumbent";
    try {
        const auto& base = doc.at("incumbent");
        incumbent_id = base.value("id", incumbent_id);
        incumbent = evolve::score(base.value("solve_rate", 0.0), base.value("time_bonus", 0.0),
                                  base.value("step_bonus", 0.0));
        for (const auto& iteration : doc.at("iterations")) {
            std::vector<evolve::EvalOutcome> outcomes;
            for (const auto& o : iteration.at("outcomes")) {
                evolve::EvalOutcome eo;
                eo.challenge = o.value("challenge", "");
                eo.solved = o.value("solved", false);
                eo.elapsed_s = o.value("elapsed_s", 0.0);
                eo.budget_s = o.value("budget_s", 1.0);
                eo.steps = o.value("steps", 0.0);
                eo.step_cap = o.value("step_cap", 1.0);
                outcomes.push_back(eo);
            }
            evaluations.push_back(std::move(outcomes));
        }
    } catch (const json::exception& e) {
        throw CliError(kExitConfig, std::string("bad evolution trace: ") + e.what());
    } catch (const std::domain_error& e) {
        throw CliError(kExitConfig, std::string("bad evolution trace: ") + e.what());
    }

    const size_t steps = a.iterations < 0 ? evaluations.size()
                                          : static_cast<size_t>(a.iterations);
    if (steps > evaluations.size())
        throw CliError(kExitConfig, "trace has " + std::to_string(evaluations.size()) +
                                        " iterations, " + std::to_string(steps) + " requested");

    out.ensure();
    size_t cursor = 0;
    evolve::ScriptedGenerator generator;
    evolve::EvolutionLoop loop(
        incumbent_id, incumbent, generator,
        [&](const evolve::Candidate&) { return evaluations.at(cursor++); },
        out.claim("evolution.jsonl"));
    try {
        const auto iterations = loop.run(steps);
        for (const auto& it : iterations)
            std::cout << "iteration " << it.iteration << " [" << it.focus << "] "
                      << it.candidate_id << " total=" << it.candidate.total << " -> "
                      << (it.accepted ? "accepted" : "rejected") << "\n";
    } catch (const std::domain_error& e) {
        throw CliError(kExitConfig, std::string("bad evaluation in trace: ") + e.what());
    }
    std::cout << "incumbent after " << steps << " iterations: " << loop.incumbent_id()
              << " (total " << loop.incumbent_score().total << ")\n";
    out.inputs = {{"trace", a.trace}, {"iterations", steps}};
    out.write_manifest("evolve");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"csi: multi-scaffold campaign harness"};
    app.require_subcommand(1);

    std::string config_path;
    OutputDir out;
    out.dir = "csi-out";

    ProxyArgs proxy_args;
    auto* proxy_cmd = app.add_subcommand("proxy", "run the routing proxy");
    proxy_cmd->add_option("--config", config_path, "flat JSON config; flags override");
    proxy_cmd->add_option("--scaffold", proxy_args.scaffold, "scaffold id for ledger rows");
    proxy_cmd->add_option("--dialect", proxy_args.inbound, "inbound wire dialect");
    proxy_cmd->add_option("--upstream-dialect", proxy_args.upstream_dialect,
                          "dialect spoken by the upstream");
    proxy_cmd->add_option("--listen-host", proxy_args.listen_host, "bind address");
    proxy_cmd->add_option("--listen-port", proxy_args.listen_port, "bind port (0 = ephemeral)");
    proxy_cmd->add_option("--path-prefix", proxy_args.path_prefix,
                          "whitelisted API path prefix (default: dialect's API path)");
    proxy_cmd->add_option("--upstream-host", proxy_args.upstream_host, "upstream host");
    proxy_cmd->add_option("--upstream-port", proxy_args.upstream_port, "upstream port");
    proxy_cmd->add_option("--upstream-path", proxy_args.upstream_path, "upstream API path");
    proxy_cmd->add_option("--ledger", proxy_args.ledger, "cost ledger path");
    proxy_cmd->add_option("--rate", proxy_args.rate, "USD per million combined tokens");
    proxy_cmd->add_flag("--check-only", proxy_args.check_only,
                        "validate and print the resolved routes, then exit");

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "execute a campaign");
    run_cmd->add_option("--config", config_path, "flat JSON config; flags override");
    run_cmd->add_option("--mode", run_args.mode, "independent | race | blackboard");
    run_cmd->add_option("--suite", run_args.suite, "suite manifest (JSON)");
    run_cmd->add_option("--scripts", run_args.scripts, "agent script set (JSON)");
    run_cmd->add_option("--epoch-ms", run_args.epoch_ms, "virtual-clock start, ms since epoch");
    run_cmd->add_option("--seed", run_args.seed, "campaign seed");
    run_cmd->add_option("--grace-ms", run_args.grace_ms, "post-victory grace window");
    run_cmd->add_option("--recency-min", run_args.recency_min,
                        "blackboard recency window, minutes");

    AggregateArgs agg_args;
    auto* agg_cmd = app.add_subcommand("aggregate",
                                       "fold records + ledger into analysis inputs");
    agg_cmd->add_option("--config", config_path, "flat JSON config; flags override");
    agg_cmd->add_option("--records", agg_args.records, "session records (JSONL)");
    agg_cmd->add_option("--ledger", agg_args.ledger, "cost ledger (JSONL)");
    agg_cmd->add_option("--suite", agg_args.suite, "suite manifest (JSON)");

    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "render analysis documents");
    report_cmd->add_option("--config", config_path, "flat JSON config; flags override");
    report_cmd->add_option("--solves", report_args.solves, "solve grid (CSV)");
    report_cmd->add_option("--costs", report_args.costs, "per-scaffold costs (JSON)");
    report_cmd->add_option("--records", report_args.records, "session records (JSONL)");
    report_cmd->add_option("--ledger", report_args.ledger, "cost ledger (JSONL)");
    report_cmd->add_option("--suite", report_args.suite, "suite manifest (JSON)");
    report_cmd->add_option("--boards", report_args.boards, "blackboard files");
    report_cmd->add_option("--board-dir", report_args.board_dir,
                           "directory to scan for blackboard files");
    report_cmd->add_option("--format", report_args.format, "markdown | csv | json");

    EvolveArgs evolve_args;
    auto* evolve_cmd = app.add_subcommand("evolve", "replay a scored candidate trace");
    evolve_cmd->add_option("--config", config_path, "flat JSON config; flags override");
    evolve_cmd->add_option("--trace", evolve_args.trace, "evaluation trace (JSON)");
    evolve_cmd->add_option("--iterations", evolve_args.iterations,
                           "iterations to run (default: all in trace)");

    for (auto* sub : {proxy_cmd, run_cmd, agg_cmd, report_cmd, evolve_cmd}) {
        sub->add_option("--out", out.dir, "output directory");
        sub->add_flag("--normalize-timestamps", out.normalize_timestamps,
                      "pin wall-clock stamps for byte-identical reruns");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        apply_config(sub, config_path);
        if (sub == proxy_cmd) return cmd_proxy(proxy_args, out);
        if (sub == run_cmd) return cmd_run(run_args, out);
        if (sub == agg_cmd) return cmd_aggregate(agg_args, out);
        if (sub == report_cmd) return cmd_report(report_args, out);
        return cmd_evolve(evolve_args, out);
    } catch (const CliError& e) {
        std::cerr << "csi: " << e.what() << "\n";
        return e.code;
    } catch (const json::exception& e) {
        std::cerr << "csi: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "csi: " << e.what() << "\n";
        return kExitConfig;
    } catch (const orch::EnvError& e) {
        std::cerr << "csi: " << e.what() << "\n";
        return kExitEnvironment;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "csi: " << e.what() << "\n";
        return kExitEnvironment;
    } catch (const std::exception& e) {
        std::cerr << "csi: " << e.what() << "\n";
        return kExitCampaign;
    }
}
