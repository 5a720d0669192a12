#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csi/orch/challenge.hpp"
#include "csi/orch/environment.hpp"

namespace csi::sim {

/// Deterministic unlock steps for a challenge: the commands a session must
/// run, in order, before the target prints its flag. Pure function of the
/// name so agents and targets agree without sharing state.
std::vector<std::string> unlock_sequence(const std::string& challenge_name);

/// In-process stand-in for a CTF target. Attached as the command handler of
/// an environment, it serves `launch` (gated on the hardened entry variable
/// round-tripping back to the real entry command), `cat` against the
/// environment's files, and the unlock sequence; any other command falls
/// through to the environment's defaults. Out-of-order unlock steps reset
/// progress, and the flag is printed only after the full sequence.
class TargetStub {
public:
    explicit TargetStub(orch::Challenge challenge);

    void attach(orch::Environment& env);

    bool launched() const { return launched_; }
    size_t unlock_progress() const { return progress_; }
    const std::vector<std::string>& steps() const { return steps_; }

private:
    std::optional<orch::ExecResult> handle(orch::Environment& env, const std::string& command);

    orch::Challenge challenge_;
    std::vector<std::string> steps_;
    bool launched_ = false;
    size_t progress_ = 0;
};

} // namespace csi::sim
