#include "csi/analytics/rollup.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace csi::analytics {

std::vector<ScaffoldRollup> rollup(const std::vector<orch::RunRecord>& records,
                                   const std::vector<proxy::LedgerEntry>& ledger,
                                   const orch::SuiteManifest& suite) {
    std::map<std::string, std::string> tier_of;
    for (const auto& ch : suite.challenges) tier_of[ch.name] = ch.tier;

    std::map<std::string, ScaffoldRollup> acc;
    std::vector<std::string> order;
    for (const auto& r : records) {
        auto it = acc.find(r.scaffold);
        if (it == acc.end()) {
            order.push_back(r.scaffold);
            it = acc.emplace(r.scaffold, ScaffoldRollup{}).first;
            it->second.scaffold = r.scaffold;
        }
        auto& roll = it->second;
        roll.attempted += 1;
        if (r.solved) roll.solved += 1;
        roll.wall_hours += r.duration_s / 3600.0;
        roll.cost_e4 += r.cost_e4;
        roll.commands += r.commands;
        roll.errors += r.errors;
        roll.input_tokens += r.input_tokens;
        roll.output_tokens += r.output_tokens;
        auto tit = tier_of.find(r.challenge);
        std::string tier = tit == tier_of.end() ? "?" : tit->second;
        auto& cell = roll.by_tier[tier];
        if (r.solved) cell.first += 1;
        cell.second += 1;
    }
    for (const auto& e : ledger) {
        auto it = acc.find(e.scaffold_id);
        if (it != acc.end() && !e.blocked) it->second.ledger_cost_e4 += e.cost_e4;
    }

    std::vector<ScaffoldRollup> out;
    out.reserve(order.size());
    for (const auto& id : order) {
        auto roll = acc[id];
        if (roll.attempted > 0)
            roll.solve_rate = static_cast<double>(roll.solved) / static_cast<double>(roll.attempted);
        if (roll.solved > 0) {
            double usd = static_cast<double>(roll.cost_e4) / 1e4;
            roll.cost_per_solve_usd = std::llround(usd / static_cast<double>(roll.solved));
        }
        out.push_back(std::move(roll));
    }
    return out;
}

namespace {

std::vector<double> normalize(const std::vector<double>& raw, bool higher_is_better) {
    std::vector<double> norm(raw.size(), 0.0);
    if (raw.empty()) return norm;
    if (higher_is_better) {
        double max = *std::max_element(raw.begin(), raw.end());
        for (size_t i = 0; i < raw.size(); ++i)
            norm[i] = max > 0 ? raw[i] / max : 0.0;
    } else {
        // Lower is better; non-positive entries mean "no data" and score 0.
        double min = 0;
        for (double v : raw)
            if (v > 0 && (min == 0 || v < min)) min = v;
        for (size_t i = 0; i < raw.size(); ++i)
            norm[i] = raw[i] > 0 && min > 0 ? min / raw[i] : 0.0;
    }
    return norm;
}

} // namespace

std::vector<RadarAxis> radar_axes(const std::vector<ScaffoldRollup>& rollups) {
    std::vector<RadarAxis> axes;
    auto add = [&](std::string name, bool higher, auto value) {
        RadarAxis ax;
        ax.name = std::move(name);
        ax.higher_is_better = higher;
        for (const auto& r : rollups) ax.raw.push_back(value(r));
        ax.normalized = normalize(ax.raw, higher);
        axes.push_back(std::move(ax));
    };
    add("solve-rate", true, [](const ScaffoldRollup& r) { return r.solve_rate; });
    add("total-cost-usd", false,
        [](const ScaffoldRollup& r) { return static_cast<double>(r.cost_e4) / 1e4; });
    add("cost-per-solve-usd", false, [](const ScaffoldRollup& r) {
        return r.cost_per_solve_usd ? static_cast<double>(*r.cost_per_solve_usd) : 0.0;
    });
    add("wall-hours", false, [](const ScaffoldRollup& r) { return r.wall_hours; });
    add("error-rate", false, [](const ScaffoldRollup& r) {
        return r.commands > 0 ? static_cast<double>(r.errors) / static_cast<double>(r.commands)
                              : 0.0;
    });
    return axes;
}

} // namespace csi::analytics
