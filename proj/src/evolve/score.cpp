#include "csi/evolve/score.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csi::evolve {

const std::array<std::string, 8>& focuses() {
    static const std::array<std::string, 8> labels = {
        "system-prompt methodology",
        "token efficiency",
        "tool definitions",
        "agent-loop logic",
        "CTF-specific patterns",
        "flag detection",
        "bash-tool ergonomics",
        "high-level methodology",
    };
    return labels;
}

const std::string& next_focus(size_t iteration) { return focuses()[iteration % 8]; }

namespace {

void check_unit(const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0)) // also catches NaN
        throw std::domain_error(std::string(name) + " must be in [0,1], got " +
                                std::to_string(v));
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

template <typename Term>
double solved_mean(const std::vector<EvalOutcome>& outcomes, Term term) {
    double sum = 0;
    size_t solved = 0;
    for (const auto& o : outcomes) {
        if (!o.solved) continue;
        sum += clamp01(term(o));
        solved += 1;
    }
    return solved == 0 ? 0.0 : sum / static_cast<double>(solved);
}

} // namespace

CandidateScore score(double solve_rate, double time_bonus, double step_bonus) {
    check_unit("solve_rate", solve_rate);
    check_unit("time_bonus", time_bonus);
    check_unit("step_bonus", step_bonus);
    CandidateScore s;
    s.solve_rate = solve_rate;
    s.time_bonus = time_bonus;
    s.step_bonus = step_bonus;
    s.total = 0.70 * solve_rate + 0.15 * time_bonus + 0.15 * step_bonus;
    return s;
}

bool accept(const CandidateScore& candidate, const CandidateScore& incumbent) {
    return candidate.total > incumbent.total;
}

double time_bonus(const std::vector<EvalOutcome>& outcomes) {
    return solved_mean(outcomes, [](const EvalOutcome& o) {
        return o.budget_s > 0 ? 1.0 - o.elapsed_s / o.budget_s : 0.0;
    });
}

double step_bonus(const std::vector<EvalOutcome>& outcomes) {
    return solved_mean(outcomes, [](const EvalOutcome& o) {
        return o.step_cap > 0 ? 1.0 - o.steps / o.step_cap : 0.0;
    });
}

CandidateScore score_outcomes(const std::vector<EvalOutcome>& outcomes) {
    double rate = 0;
    if (!outcomes.empty()) {
        size_t solved = 0;
        for (const auto& o : outcomes)
            if (o.solved) solved += 1;
        rate = static_cast<double>(solved) / static_cast<double>(outcomes.size());
    }
    return score(rate, time_bonus(outcomes), step_bonus(outcomes));
}

} // namespace csi::evolve
