#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csi/blackboard/policy.hpp"
#include "csi/wire/canonical.hpp"
#include "csi/wire/dialect.hpp"

namespace csi::sim {

/// Per-turn token usage generator: piecewise-linear input growth with
/// optional sawtooth resets, or explicit per-turn points.
struct UsageModel {
    std::int64_t input_start = 2000;
    std::int64_t input_step = 500;
    std::int64_t output_per_turn = 300;
    int reset_every = 0; // 0 = never; k > 0 restarts the ramp every k turns
    std::vector<std::pair<std::int64_t, std::int64_t>> points; // overrides the ramp

    wire::TokenUsage at(int turn_index_zero_based) const;

    static UsageModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// What one agent does on one challenge.
struct ChallengePlan {
    bool solve = false;
    int solve_turn = 3;        // 1-based; the flag appears on this turn
    double elapsed_s = 300;    // virtual seconds from launch to the solve turn
    int turns = 6;             // loop length; timeout plans cycle forever
    double turn_seconds = 30;  // pacing for timeout plans
    UsageModel usage;
    bool reads = false;        // acts on read directives
    bool writes = false;       // posts findings when directed
    int posts = 0;             // post quota per session
    std::vector<int> error_turns; // turns that also run a failing command

    static ChallengePlan from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct AgentScript {
    std::string scaffold;
    wire::Dialect dialect = wire::Dialect::OpenAiChatCompletions;
    std::string model = "alias1-mini";
    blackboard::RolePolicy role_policy;
    std::map<std::string, ChallengePlan> challenges;

    /// Plan for a challenge; scripts without an entry idle to timeout.
    ChallengePlan plan_for(const std::string& challenge) const;

    static AgentScript from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ScriptSet {
    std::vector<AgentScript> agents;

    const AgentScript* find(const std::string& scaffold) const;

    static ScriptSet from_json(const nlohmann::json& j);
    static ScriptSet load(const std::string& path);
    nlohmann::json to_json() const;
};

} // namespace csi::sim
