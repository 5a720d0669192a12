#pragma once

#include <memory>
#include <string>

#include "csi/orch/campaign.hpp"
#include "csi/sim/script.hpp"
#include "csi/sim/target.hpp"

namespace csi::sim {

/// Where an agent's proxy listens and what dialect it speaks there.
struct ProxyEndpoint {
    int port = 0;
    wire::Dialect dialect = wire::Dialect::OpenAiChatCompletions;
    std::string api_path;
};

/// Scripted stand-in for a scaffold session. Each turn it runs commands
/// against the target environment, sends one model request in its own wire
/// dialect through its proxy, and obeys any cooperation directive the reply
/// carries (reads the board delta, posts findings) as far as its script
/// cooperates. Solving scripts walk the target's unlock sequence on their
/// scripted turn, so the flag in the output comes from the target itself.
class SimAgent : public orch::SessionDriver {
public:
    SimAgent(const orch::SessionSetup& setup, ChallengePlan plan, ProxyEndpoint endpoint,
             std::string model);

    TimeMs first_delay() const override;
    orch::TurnResult turn() override;
    std::int64_t turns_taken() const override { return turn_; }

private:
    TimeMs time_of_turn(int k) const;
    std::string call_model(int behavior_turn);
    void obey_directive(const std::string& assistant_text);

    std::string scaffold_;
    std::string session_;
    std::string challenge_;
    ChallengePlan plan_;
    ProxyEndpoint endpoint_;
    std::string model_;
    orch::Environment* env_;
    std::shared_ptr<blackboard::Substrate> board_;
    TargetStub target_;
    int turn_ = 0;
    int posts_left_ = 0;
};

} // namespace csi::sim
