#pragma once

#include <array>
#include <string>
#include <vector>

namespace csi::evolve {

/// The eight rewrite focuses the meta-harness cycles through, in rotation
/// order. Fixed labels; iteration i works on focuses()[i % 8].
const std::array<std::string, 8>& focuses();
const std::string& next_focus(size_t iteration);

/// Weighted candidate fitness: 0.70 solve rate, 0.15 time bonus, 0.15 step
/// bonus. All three components live in [0,1], so total does too.
struct CandidateScore {
    double solve_rate = 0;
    double time_bonus = 0;
    double step_bonus = 0;
    double total = 0;
};

/// Throws std::domain_error when any component is outside [0,1] (or NaN).
CandidateScore score(double solve_rate, double time_bonus, double step_bonus);

/// Strict-improvement gate: equality rejects.
bool accept(const CandidateScore& candidate, const CandidateScore& incumbent);

/// One training-item attempt during candidate evaluation.
struct EvalOutcome {
    std::string challenge;
    bool solved = false;
    double elapsed_s = 0;
    double budget_s = 1;
    double steps = 0;
    double step_cap = 1;
};

/// Bonus shapes: mean over *solved* items of (1 - elapsed/budget) resp.
/// (1 - steps/step_cap), each term clamped to [0,1]; 0 when nothing solved.
double time_bonus(const std::vector<EvalOutcome>& outcomes);
double step_bonus(const std::vector<EvalOutcome>& outcomes);

/// solve_rate = solved / total (0 for an empty evaluation), then score().
CandidateScore score_outcomes(const std::vector<EvalOutcome>& outcomes);

} // namespace csi::evolve
