#include "csi/blackboard/engine.hpp"

namespace csi::blackboard {

InjectionEngine::InjectionEngine(std::shared_ptr<Clock> clock, TimeMs recency_window_ms)
    : clock_(std::move(clock)), recency_window_ms_(recency_window_ms) {}

void InjectionEngine::register_session(const std::string& session_id, RolePolicy policy,
                                       TimeMs start_ms, TimeMs budget_ms,
                                       std::shared_ptr<Substrate> substrate) {
    std::lock_guard<std::mutex> lock(mutex_);
    Session s;
    s.policy = policy;
    s.start_ms = start_ms;
    s.budget_ms = budget_ms > 0 ? budget_ms : 1;
    s.substrate = std::move(substrate);
    sessions_[session_id] = std::move(s);
}

void InjectionEngine::set_flag_observed(const std::string& session_id) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it != sessions_.end()) it->second.state.flag_observed = true;
}

std::optional<std::string> InjectionEngine::before_forward(const std::string&,
                                                           const std::string& session_id) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) return std::nullopt; // unmanaged traffic
    Session& s = it->second;

    const TimeMs now = clock_->now_ms();
    s.state.requests_seen += 1;
    s.state.elapsed_fraction =
        static_cast<double>(now - s.start_ms) / static_cast<double>(s.budget_ms);
    s.state.recent_post_count =
        s.substrate ? static_cast<int>(s.substrate->recent_post_count(now, recency_window_ms_)) : 0;

    const InjectionDecision d = should_inject(s.state, s.policy);
    if (!d.inject) return std::nullopt;

    const std::string text =
        render_directive(d.directive_class, s.state.last_read_line, d.quiet_board,
                         s.substrate ? s.substrate->mount_path() : "/blackboard/notes.md");
    // Assume the scaffold honors the read; the next directive starts where
    // the board ends now.
    if (s.substrate) s.state.last_read_line = s.substrate->line_count() + 1;
    s.injections += 1;
    return text;
}

InjectionState InjectionEngine::state(const std::string& session_id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sessions_.find(session_id);
    return it == sessions_.end() ? InjectionState{} : it->second.state;
}

int InjectionEngine::injection_count(const std::string& session_id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sessions_.find(session_id);
    return it == sessions_.end() ? 0 : it->second.injections;
}

} // namespace csi::blackboard
