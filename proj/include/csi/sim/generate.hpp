#pragma once

#include <string>
#include <vector>

#include "csi/analytics/solve_matrix.hpp"
#include "csi/orch/campaign.hpp"
#include "csi/orch/challenge.hpp"
#include "csi/sim/script.hpp"

namespace csi::sim {

/// One row of a recorded shared-mode outcome table: who produced the
/// accepted flag for a challenge, and after how many minutes. An empty
/// winner means the challenge went unsolved in that campaign.
struct OutcomeRow {
    std::string challenge;
    std::string winner;
    double minutes = 0;
};

std::vector<OutcomeRow> parse_outcomes_csv(const std::string& text);
std::vector<OutcomeRow> load_outcomes_csv(const std::string& path);

/// Deterministic pacing/usage knobs for one (scaffold, challenge) pair.
/// solve_minutes <= 0 derives a pace from a stable hash of the pair; the
/// derived pace always lands inside the challenge budget.
ChallengePlan default_plan(const std::string& scaffold, const orch::Challenge& challenge,
                           bool solve, double solve_minutes = 0);

/// Scripts for an independent campaign: every solved cell of the grid
/// becomes a solving plan at a deterministic pace; the rest idle out their
/// budgets. Role policies on the specs decide board cooperation flags.
ScriptSet scripts_from_matrix(const analytics::SolveMatrix& m, const orch::SuiteManifest& suite,
                              const std::vector<orch::ScaffoldSpec>& specs);

/// Scripts for a first-flag-wins campaign from a recorded outcome table:
/// the recorded winner solves at the recorded minute mark; peers idle.
ScriptSet scripts_from_outcomes(const std::vector<OutcomeRow>& rows,
                                const orch::SuiteManifest& suite,
                                const std::vector<orch::ScaffoldSpec>& specs);

} // namespace csi::sim
