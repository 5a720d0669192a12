#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace csi::blackboard {

/// How much cooperation pressure a scaffold receives.
enum class Role { Writer, Reader, FirstTurnOnly, None };

std::string to_string(Role r);
Role role_from_string(std::string_view s);

struct RolePolicy {
    Role role = Role::None;
    int cadence_n = 8;                   // re-inject every n requests
    double budget_cutoff_fraction = 0.5; // no directives past this point
};

/// Per-session counters the decision runs on. requests_seen counts the
/// current request (1-based); last_read_line is the next unread substrate
/// line (1-based cursor, at most line_count + 1).
struct InjectionState {
    int requests_seen = 0;
    size_t last_read_line = 1;
    bool flag_observed = false;
    double elapsed_fraction = 0.0;
    int recent_post_count = 0;
};

enum class DirectiveClass { ReadOnly, ReadWrite };

enum class SuppressReason { None, Role, Victory, Budget, Cadence };

std::string to_string(SuppressReason r);

struct InjectionDecision {
    bool inject = false;
    DirectiveClass directive_class = DirectiveClass::ReadOnly;
    SuppressReason suppressed_by = SuppressReason::None;
    /// Emptiness gate: true when the recency-filtered post count is zero.
    /// Advisory only — it shades directive wording, never the decision.
    bool quiet_board = false;
};

/// The injection gate. Injects iff the role participates, no flag has been
/// seen in this session's output, the session is before the budget cutoff,
/// and the request index sits on the cadence (request 1, then every
/// cadence_n-th request after it; first-turn-only roles get request 1 only).
InjectionDecision should_inject(const InjectionState& state, const RolePolicy& policy);

} // namespace csi::blackboard
