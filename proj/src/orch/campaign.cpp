#include "csi/orch/campaign.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <queue>

#include "csi/orch/anticheat.hpp"
#include "csi/orch/flag_detect.hpp"
#include "csi/proxy/ledger.hpp"

namespace csi::orch {

std::string to_string(CampaignMode mode) {
    switch (mode) {
        case CampaignMode::Independent: return "independent";
        case CampaignMode::Race: return "race";
        case CampaignMode::Blackboard: return "blackboard";
    }
    return "independent";
}

CampaignMode campaign_mode_from_string(const std::string& s) {
    if (s == "independent") return CampaignMode::Independent;
    if (s == "race") return CampaignMode::Race;
    if (s == "blackboard") return CampaignMode::Blackboard;
    throw std::invalid_argument("unknown campaign mode: " + s);
}

std::string backend_tag(const std::string& scaffold_id) {
    return scaffold_id == "claude" ? "cc" : scaffold_id;
}

namespace {

struct Session {
    const ScaffoldSpec* spec = nullptr;
    std::string session_id;
    std::unique_ptr<LocalEnvironment> env;
    std::unique_ptr<SessionDriver> driver;
    FlagDetector detector;
    TimeMs t0 = 0;
    bool done = false;
    RunRecord record;

    Session(const ScaffoldSpec* s, std::string id, const std::string& pattern)
        : spec(s), session_id(std::move(id)), detector(pattern) {}
};

/// Provision + harden one target environment; throws EnvError on failure so
/// the session is never launched half-prepared.
std::unique_ptr<LocalEnvironment> prepared_environment(const Challenge& challenge,
                                                       const ScaffoldSpec& spec,
                                                       const RunnerServices& services,
                                                       CampaignMode mode) {
    auto root = services.work_dir + "/" + challenge.name + "/" + to_string(mode) + "/" + spec.id;
    auto env = std::make_unique<LocalEnvironment>(root);
    provision_target(*env, challenge, services.seed + std::hash<std::string>{}(challenge.name + spec.id) % 1000);
    env->set_env("CSI_BACKEND", backend_tag(spec.id));
    const char* key = std::getenv("ALIAS_API_KEY");
    env->set_env("ALIAS_API_KEY", key ? key : "sk-local-dev");
    prepare_anticheat(*env, challenge);
    return env;
}

void finalize(Session& s, const Challenge& challenge, CampaignMode mode, TimeMs end_ms,
              bool solved, bool winner, const std::string& flag, TimeMs budget_ms) {
    TimeMs span = std::min(end_ms - s.t0, budget_ms);
    s.record.challenge = challenge.name;
    s.record.scaffold = s.spec->id;
    s.record.mode = to_string(mode);
    s.record.session_id = s.session_id;
    s.record.solved = solved;
    s.record.flag = solved ? flag : "";
    s.record.winner = winner;
    s.record.duration_s = static_cast<double>(span) / 1000.0;
    s.record.commands = s.env->command_count();
    s.record.errors = s.env->error_count();
    s.record.turns = s.driver->turns_taken();
    s.done = true;
}

void reconcile_with_ledger(std::vector<Session>& sessions, const std::string& ledger_path) {
    if (ledger_path.empty()) return;
    std::map<std::string, std::array<std::int64_t, 3>> sums; // in, out, cost_e4
    for (const auto& e : proxy::read_ledger(ledger_path)) {
        auto& acc = sums[e.session_id];
        acc[0] += e.input_tokens;
        acc[1] += e.output_tokens;
        acc[2] += e.cost_e4;
    }
    for (auto& s : sessions) {
        auto it = sums.find(s.session_id);
        if (it == sums.end()) continue;
        s.record.input_tokens = it->second[0];
        s.record.output_tokens = it->second[1];
        s.record.cost_e4 = it->second[2];
    }
}

struct Event {
    TimeMs at;
    std::uint64_t seq;
    size_t idx;
    bool operator>(const Event& other) const {
        return at != other.at ? at > other.at : seq > other.seq;
    }
};

/// Shared event loop for the concurrent modes: pops (time, seq)-ordered turn
/// events, advances the virtual clock, and applies victory/timeout clamps.
void run_concurrent(std::vector<Session>& sessions, const Challenge& challenge,
                    CampaignMode mode, RunnerServices& services, TimeMs budget_ms) {
    auto& clock = *services.clock;
    const TimeMs t0 = clock.now_ms();
    const TimeMs deadline = t0 + budget_ms;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> heap;
    std::uint64_t seq = 0;
    std::map<size_t, TimeMs> next_at;
    for (size_t i = 0; i < sessions.size(); ++i) {
        sessions[i].t0 = t0;
        sessions[i].record.started_at = rfc3339_utc(t0);
        sessions[i].record.injections = 0;
        TimeMs at = t0 + sessions[i].driver->first_delay();
        heap.push({at, seq++, i});
        next_at[i] = at;
    }

    bool have_winner = false;
    TimeMs winner_time = 0;
    std::string winning_flag;

    while (!heap.empty()) {
        Event ev = heap.top();
        heap.pop();
        Session& s = sessions[ev.idx];
        if (s.done) continue;

        if (have_winner) {
            TimeMs end = std::min(ev.at, winner_time + services.grace_ms);
            finalize(s, challenge, mode, end, false, false, "", budget_ms);
            continue;
        }
        if (ev.at > deadline) {
            finalize(s, challenge, mode, deadline, false, false, "", budget_ms);
            continue;
        }

        clock.set_ms(ev.at);
        TurnResult result = s.driver->turn();
        auto flag = s.detector.feed(result.output);
        if (flag && *flag == challenge.literal_flag) {
            have_winner = true;
            winner_time = ev.at;
            winning_flag = *flag;
            if (services.engine)
                for (auto& peer : sessions) services.engine->set_flag_observed(peer.session_id);
            finalize(s, challenge, mode, ev.at, true, true, *flag, budget_ms);
            continue;
        }
        if (!result.next_in) {
            finalize(s, challenge, mode, ev.at, false, false, "", budget_ms);
            continue;
        }
        TimeMs at = ev.at + std::max<TimeMs>(*result.next_in, 1);
        heap.push({at, seq++, ev.idx});
        next_at[ev.idx] = at;
    }
    // Anything still pending (queue drained via winner path) is already
    // finalized above; advance the clock past the challenge window.
    TimeMs end_of_round = t0;
    for (const auto& s : sessions)
        end_of_round = std::max(end_of_round,
                                s.t0 + static_cast<TimeMs>(std::llround(s.record.duration_s * 1000)));
    clock.set_ms(std::max(clock.now_ms(), end_of_round));
}

/// Independent mode: one session at a time, each against its own clock span.
void run_sequential(std::vector<Session>& sessions, const Challenge& challenge,
                    RunnerServices& services, TimeMs budget_ms) {
    auto& clock = *services.clock;
    for (auto& s : sessions) {
        s.t0 = clock.now_ms();
        s.record.started_at = rfc3339_utc(s.t0);
        const TimeMs deadline = s.t0 + budget_ms;
        TimeMs at = s.t0 + s.driver->first_delay();
        while (true) {
            if (at > deadline) {
                finalize(s, challenge, CampaignMode::Independent, deadline, false, false, "",
                         budget_ms);
                break;
            }
            clock.set_ms(at);
            TurnResult result = s.driver->turn();
            auto flag = s.detector.feed(result.output);
            if (flag && *flag == challenge.literal_flag) {
                finalize(s, challenge, CampaignMode::Independent, at, true, false, *flag,
                         budget_ms);
                break;
            }
            if (!result.next_in) {
                finalize(s, challenge, CampaignMode::Independent, at, false, false, "", budget_ms);
                break;
            }
            at += std::max<TimeMs>(*result.next_in, 1);
        }
        clock.set_ms(std::max(clock.now_ms(), s.t0 + static_cast<TimeMs>(std::llround(
                                            s.record.duration_s * 1000))));
    }
}

} // namespace

std::vector<RunRecord> run_challenge(CampaignMode mode, const Challenge& challenge,
                                     const std::vector<ScaffoldSpec>& scaffolds,
                                     RunnerServices& services, RecordWriter* records) {
    if (!services.clock) throw std::invalid_argument("run_challenge: clock required");
    if (!services.factory) throw std::invalid_argument("run_challenge: driver factory required");
    if (mode == CampaignMode::Blackboard && !services.engine)
        throw std::invalid_argument("run_challenge: blackboard mode needs an injection engine");

    const TimeMs budget_ms =
        static_cast<TimeMs>(std::llround(challenge.est_time_minutes * 60.0 * 1000.0));

    std::shared_ptr<blackboard::Substrate> board;
    if (mode == CampaignMode::Blackboard) {
        auto dir = services.work_dir + "/" + challenge.name + "/blackboard";
        std::filesystem::create_directories(dir);
        board = std::make_shared<blackboard::Substrate>(dir + "/notes.md", services.clock);
    }

    std::vector<Session> sessions;
    sessions.reserve(scaffolds.size());
    const TimeMs registration_t0 = services.clock->now_ms();
    for (const auto& spec : scaffolds) {
        Session s(&spec, spec.id + "-" + challenge.name + "-" + to_string(mode),
                  challenge.flag_pattern);
        s.env = prepared_environment(challenge, spec, services, mode);
        SessionSetup setup;
        setup.spec = &spec;
        setup.challenge = &challenge;
        setup.mode = mode;
        setup.session_id = s.session_id;
        setup.env = s.env.get();
        setup.substrate = board;
        if (mode == CampaignMode::Blackboard)
            services.engine->register_session(s.session_id, spec.role_policy, registration_t0,
                                              budget_ms, board);
        s.driver = services.factory(setup);
        if (!s.driver) throw std::invalid_argument("driver factory returned null");
        sessions.push_back(std::move(s));
    }

    if (mode == CampaignMode::Independent)
        run_sequential(sessions, challenge, services, budget_ms);
    else
        run_concurrent(sessions, challenge, mode, services, budget_ms);

    reconcile_with_ledger(sessions, services.ledger_path);
    if (services.engine)
        for (auto& s : sessions)
            s.record.injections = services.engine->injection_count(s.session_id);

    std::vector<RunRecord> out;
    out.reserve(sessions.size());
    for (auto& s : sessions) {
        if (records) records->emit(s.record);
        out.push_back(s.record);
    }
    return out;
}

std::vector<RunRecord> run_campaign(CampaignMode mode, const SuiteManifest& suite,
                                    const std::vector<ScaffoldSpec>& scaffolds,
                                    RunnerServices& services, RecordWriter* records) {
    std::vector<RunRecord> all;
    for (const auto& challenge : suite.challenges) {
        auto batch = run_challenge(mode, challenge, scaffolds, services, records);
        all.insert(all.end(), batch.begin(), batch.end());
    }
    return all;
}

} // namespace csi::orch
