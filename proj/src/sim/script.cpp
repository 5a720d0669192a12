#include "csi/sim/script.hpp"

#include <fstream>
#include <stdexcept>

namespace csi::sim {

using nlohmann::json;

wire::TokenUsage UsageModel::at(int turn_index_zero_based) const {
    wire::TokenUsage u;
    if (!points.empty()) {
        const auto& p = points[std::min<size_t>(turn_index_zero_based, points.size() - 1)];
        u.input_tokens = p.first;
        u.output_tokens = p.second;
        return u;
    }
    int ramp = turn_index_zero_based;
    if (reset_every > 0) ramp = turn_index_zero_based % reset_every;
    u.input_tokens = input_start + input_step * ramp;
    u.output_tokens = output_per_turn;
    return u;
}

UsageModel UsageModel::from_json(const json& j) {
    UsageModel m;
    m.input_start = j.value("input_start", m.input_start);
    m.input_step = j.value("input_step", m.input_step);
    m.output_per_turn = j.value("output_per_turn", m.output_per_turn);
    m.reset_every = j.value("reset_every", m.reset_every);
    if (j.contains("points")) {
        for (const auto& p : j.at("points")) {
            m.points.emplace_back(p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>());
        }
    }
    return m;
}

json UsageModel::to_json() const {
    json j{{"input_start", input_start},
           {"input_step", input_step},
           {"output_per_turn", output_per_turn},
           {"reset_every", reset_every}};
    if (!points.empty()) {
        json arr = json::array();
        for (const auto& p : points) arr.push_back(json::array({p.first, p.second}));
        j["points"] = arr;
    }
    return j;
}

ChallengePlan ChallengePlan::from_json(const json& j) {
    ChallengePlan p;
    p.solve = j.value("solve", p.solve);
    p.solve_turn = j.value("solve_turn", p.solve_turn);
    p.elapsed_s = j.value("elapsed_s", p.elapsed_s);
    p.turns = j.value("turns", p.turns);
    p.turn_seconds = j.value("turn_seconds", p.turn_seconds);
    if (j.contains("usage")) p.usage = UsageModel::from_json(j.at("usage"));
    p.reads = j.value("reads", p.reads);
    p.writes = j.value("writes", p.writes);
    p.posts = j.value("posts", p.posts);
    if (j.contains("error_turns")) {
        p.error_turns = j.at("error_turns").get<std::vector<int>>();
    }
    return p;
}

json ChallengePlan::to_json() const {
    json j{{"solve", solve},         {"solve_turn", solve_turn},
           {"elapsed_s", elapsed_s}, {"turns", turns},
           {"turn_seconds", turn_seconds}, {"usage", usage.to_json()},
           {"reads", reads},         {"writes", writes},
           {"posts", posts}};
    if (!error_turns.empty()) j["error_turns"] = error_turns;
    return j;
}

ChallengePlan AgentScript::plan_for(const std::string& challenge) const {
    auto it = challenges.find(challenge);
    if (it != challenges.end()) return it->second;
    ChallengePlan idle;
    idle.solve = false;
    return idle;
}

AgentScript AgentScript::from_json(const json& j) {
    AgentScript s;
    s.scaffold = j.at("scaffold").get<std::string>();
    s.dialect = wire::dialect_from_string(j.value("dialect", "openai-chat-completions"));
    s.model = j.value("model", s.model);
    if (j.contains("role_policy")) {
        const auto& rp = j.at("role_policy");
        s.role_policy.role = blackboard::role_from_string(rp.value("role", "none"));
        s.role_policy.cadence_n = rp.value("cadence_n", s.role_policy.cadence_n);
        s.role_policy.budget_cutoff_fraction =
            rp.value("budget_cutoff_fraction", s.role_policy.budget_cutoff_fraction);
    }
    if (j.contains("challenges")) {
        for (const auto& [name, body] : j.at("challenges").items()) {
            s.challenges.emplace(name, ChallengePlan::from_json(body));
        }
    }
    return s;
}

json AgentScript::to_json() const {
    json ch = json::object();
    for (const auto& [name, plan] : challenges) ch[name] = plan.to_json();
    return json{{"scaffold", scaffold},
                {"dialect", std::string(wire::to_string(dialect))},
                {"model", model},
                {"role_policy",
                 json{{"role", blackboard::to_string(role_policy.role)},
                      {"cadence_n", role_policy.cadence_n},
                      {"budget_cutoff_fraction", role_policy.budget_cutoff_fraction}}},
                {"challenges", ch}};
}

const AgentScript* ScriptSet::find(const std::string& scaffold) const {
    for (const auto& a : agents) {
        if (a.scaffold == scaffold) return &a;
    }
    return nullptr;
}

ScriptSet ScriptSet::from_json(const json& j) {
    ScriptSet set;
    for (const auto& a : j.at("agents")) set.agents.push_back(AgentScript::from_json(a));
    return set;
}

ScriptSet ScriptSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script set: " + path);
    json j = json::parse(in);
    return from_json(j);
}

json ScriptSet::to_json() const {
    json arr = json::array();
    for (const auto& a : agents) arr.push_back(a.to_json());
    return json{{"agents", arr}};
}

} // namespace csi::sim
