#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "csi/blackboard/directive.hpp"
#include "csi/blackboard/policy.hpp"
#include "csi/blackboard/substrate.hpp"
#include "csi/clock.hpp"
#include "csi/proxy/server.hpp"

namespace csi::blackboard {

/// Per-session directive injection, driven from the proxy's request path.
/// The orchestrator registers a session (role, budget, board) at launch and
/// reports flag sightings; the engine does the counting and rendering.
class InjectionEngine : public proxy::InjectionHook {
public:
    explicit InjectionEngine(std::shared_ptr<Clock> clock,
                             TimeMs recency_window_ms = 10 * 60 * 1000);

    void register_session(const std::string& session_id, RolePolicy policy, TimeMs start_ms,
                          TimeMs budget_ms, std::shared_ptr<Substrate> substrate);

    /// Post-victory suppression: once the orchestrator sees a flag pattern in
    /// this session's output, no further directives are injected.
    void set_flag_observed(const std::string& session_id);

    std::optional<std::string> before_forward(const std::string& scaffold_id,
                                              const std::string& session_id) override;

    /// Snapshot for records/analytics; unknown session returns defaults.
    InjectionState state(const std::string& session_id) const;
    int injection_count(const std::string& session_id) const;

private:
    struct Session {
        RolePolicy policy;
        TimeMs start_ms = 0;
        TimeMs budget_ms = 1;
        std::shared_ptr<Substrate> substrate;
        InjectionState state;
        int injections = 0;
    };

    std::shared_ptr<Clock> clock_;
    TimeMs recency_window_ms_;
    mutable std::mutex mutex_;
    std::map<std::string, Session> sessions_;
};

} // namespace csi::blackboard
