#include "csi/sim/generate.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csi::sim {

namespace {

std::uint64_t fnv64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void apply_role_flags(ChallengePlan& plan, const blackboard::RolePolicy& policy) {
    switch (policy.role) {
        case blackboard::Role::Writer:
            plan.reads = true;
            plan.writes = true;
            plan.posts = 2;
            break;
        case blackboard::Role::Reader:
        case blackboard::Role::FirstTurnOnly:
            plan.reads = true;
            break;
        case blackboard::Role::None:
            break;
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

} // namespace

std::vector<OutcomeRow> parse_outcomes_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("outcomes csv: empty document");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "challenge,winner,minutes")
        throw std::invalid_argument("outcomes csv: unexpected header '" + line + "'");

    std::vector<OutcomeRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw std::invalid_argument("outcomes csv: bad row '" + line + "'");
        OutcomeRow row;
        row.challenge = fields[0];
        row.winner = fields[1];
        if (!fields[2].empty()) row.minutes = std::stod(fields[2]);
        if (!row.winner.empty() && row.minutes <= 0)
            throw std::invalid_argument("outcomes csv: winner without minutes on '" +
                                        row.challenge + "'");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<OutcomeRow> load_outcomes_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open outcomes csv: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_outcomes_csv(buf.str());
}

ChallengePlan default_plan(const std::string& scaffold, const orch::Challenge& challenge,
                           bool solve, double solve_minutes) {
    const std::uint64_t h = fnv64(scaffold + "|" + challenge.name);
    const double budget_s = challenge.est_time_minutes * 60.0;

    ChallengePlan plan;
    plan.usage.input_start = 1200 + static_cast<std::int64_t>((h >> 8) % 1800);
    plan.usage.input_step = 200 + static_cast<std::int64_t>((h >> 16) % 500);
    plan.usage.output_per_turn = 180 + static_cast<std::int64_t>((h >> 24) % 300);
    if (h % 3 == 0) plan.error_turns = {2};

    if (solve) {
        plan.solve = true;
        plan.solve_turn = 3 + static_cast<int>((h >> 4) % 4);
        plan.elapsed_s = solve_minutes > 0
                             ? solve_minutes * 60.0
                             : budget_s * (0.30 + static_cast<double>(h % 45) / 100.0);
        plan.turns = plan.solve_turn;
        plan.turn_seconds = plan.elapsed_s / plan.solve_turn;
    } else {
        plan.solve = false;
        plan.turns = 6;
        plan.turn_seconds = budget_s / 6.0;
    }
    return plan;
}

ScriptSet scripts_from_matrix(const analytics::SolveMatrix& m, const orch::SuiteManifest& suite,
                              const std::vector<orch::ScaffoldSpec>& specs) {
    ScriptSet set;
    for (const auto& spec : specs) {
        size_t col = m.scaffolds.size();
        for (size_t c = 0; c < m.scaffolds.size(); ++c) {
            if (m.scaffolds[c] == spec.id) col = c;
        }
        if (col == m.scaffolds.size())
            throw std::invalid_argument("solve grid has no column for scaffold " + spec.id);

        AgentScript agent;
        agent.scaffold = spec.id;
        agent.dialect = spec.dialect;
        agent.model = spec.model_id;
        agent.role_policy = spec.role_policy;
        for (size_t r = 0; r < m.rows(); ++r) {
            const auto* challenge = suite.find(m.challenges[r]);
            if (!challenge)
                throw std::invalid_argument("suite manifest is missing challenge " +
                                            m.challenges[r]);
            auto plan = default_plan(spec.id, *challenge, m.solved(r, col));
            apply_role_flags(plan, spec.role_policy);
            agent.challenges.emplace(challenge->name, std::move(plan));
        }
        set.agents.push_back(std::move(agent));
    }
    return set;
}

ScriptSet scripts_from_outcomes(const std::vector<OutcomeRow>& rows,
                                const orch::SuiteManifest& suite,
                                const std::vector<orch::ScaffoldSpec>& specs) {
    ScriptSet set;
    for (const auto& spec : specs) {
        AgentScript agent;
        agent.scaffold = spec.id;
        agent.dialect = spec.dialect;
        agent.model = spec.model_id;
        agent.role_policy = spec.role_policy;
        for (const auto& row : rows) {
            const auto* challenge = suite.find(row.challenge);
            if (!challenge)
                throw std::invalid_argument("suite manifest is missing challenge " +
                                            row.challenge);
            const bool wins = row.winner == spec.id;
            if (wins && row.minutes * 60.0 >= challenge->est_time_minutes * 60.0)
                throw std::invalid_argument("recorded solve time exceeds the budget on " +
                                            row.challenge);
            auto plan = default_plan(spec.id, *challenge, wins, wins ? row.minutes : 0);
            apply_role_flags(plan, spec.role_policy);
            agent.challenges.emplace(challenge->name, std::move(plan));
        }
        set.agents.push_back(std::move(agent));
    }
    return set;
}

} // namespace csi::sim
