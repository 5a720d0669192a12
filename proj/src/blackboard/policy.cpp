#include "csi/blackboard/policy.hpp"

#include <stdexcept>

namespace csi::blackboard {

std::string to_string(Role r) {
    switch (r) {
    case Role::Writer: return "writer";
    case Role::Reader: return "reader";
    case Role::FirstTurnOnly: return "first-turn-only";
    case Role::None: return "none";
    }
    return "none";
}

Role role_from_string(std::string_view s) {
    if (s == "writer") return Role::Writer;
    if (s == "reader") return Role::Reader;
    if (s == "first-turn-only") return Role::FirstTurnOnly;
    if (s == "none") return Role::None;
    throw std::invalid_argument("unknown role '" + std::string(s) + "'");
}

std::string to_string(SuppressReason r) {
    switch (r) {
    case SuppressReason::None: return "none";
    case SuppressReason::Role: return "role";
    case SuppressReason::Victory: return "victory";
    case SuppressReason::Budget: return "budget";
    case SuppressReason::Cadence: return "cadence";
    }
    return "none";
}

InjectionDecision should_inject(const InjectionState& state, const RolePolicy& policy) {
    InjectionDecision d;
    d.quiet_board = state.recent_post_count == 0;
    d.directive_class =
        policy.role == Role::Reader ? DirectiveClass::ReadOnly : DirectiveClass::ReadWrite;

    if (policy.role == Role::None) {
        d.suppressed_by = SuppressReason::Role;
        return d;
    }
    if (state.flag_observed) {
        d.suppressed_by = SuppressReason::Victory;
        return d;
    }
    if (state.elapsed_fraction >= policy.budget_cutoff_fraction) {
        d.suppressed_by = SuppressReason::Budget;
        return d;
    }
    const bool on_cadence =
        state.requests_seen == 1 ||
        (policy.role != Role::FirstTurnOnly && policy.cadence_n > 0 &&
         (state.requests_seen - 1) % policy.cadence_n == 0);
    if (!on_cadence) {
        d.suppressed_by = SuppressReason::Cadence;
        return d;
    }
    d.inject = true;
    return d;
}

} // namespace csi::blackboard
