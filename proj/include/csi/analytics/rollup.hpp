#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csi/orch/challenge.hpp"
#include "csi/orch/record.hpp"
#include "csi/proxy/ledger.hpp"

namespace csi::analytics {

/// Scoreboard row for one scaffold across a campaign.
struct ScaffoldRollup {
    std::string scaffold;
    size_t attempted = 0;
    size_t solved = 0;
    double solve_rate = 0; // solved / attempted
    double wall_hours = 0;
    std::int64_t cost_e4 = 0;
    std::optional<std::int64_t> cost_per_solve_usd; // nearest dollar; empty when solved == 0
    std::int64_t commands = 0;
    std::int64_t errors = 0;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::int64_t ledger_cost_e4 = 0;                     // cross-check against cost_e4
    std::map<std::string, std::pair<size_t, size_t>> by_tier; // tier -> {solved, attempted}
};

/// Aggregate records per scaffold; the ledger rides along as an independent
/// cost cross-check, and the suite supplies tier labels (unknown challenges
/// land in tier "?").
std::vector<ScaffoldRollup> rollup(const std::vector<orch::RunRecord>& records,
                                   const std::vector<proxy::LedgerEntry>& ledger,
                                   const orch::SuiteManifest& suite);

/// One normalized radar axis across scaffolds. Higher-is-better axes map as
/// value/max; lower-is-better as min/value (best = 1.0), where the min is
/// taken over positive entries and non-positive entries score 0 (no data).
struct RadarAxis {
    std::string name;
    bool higher_is_better = true;
    std::vector<double> raw;
    std::vector<double> normalized;
};

std::vector<RadarAxis> radar_axes(const std::vector<ScaffoldRollup>& rollups);

} // namespace csi::analytics
