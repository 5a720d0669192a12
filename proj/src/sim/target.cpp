#include "csi/sim/target.hpp"

#include <array>

#include "csi/orch/anticheat.hpp"

namespace csi::sim {

std::vector<std::string> unlock_sequence(const std::string& challenge_name) {
    static const std::array<const char*, 6> verbs = {"probe",  "enumerate", "pivot",
                                                     "decode", "overflow",  "replay"};
    // FNV-1a keeps the sequence a stable function of the name alone.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : challenge_name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    const int stages = 2 + static_cast<int>(h % 3);
    std::vector<std::string> steps;
    steps.reserve(stages + 1);
    for (int i = 0; i < stages; ++i) {
        const char* verb = verbs[(h >> (8 * i)) % verbs.size()];
        steps.push_back(std::string(verb) + " " + challenge_name + " --stage " +
                        std::to_string(i + 1));
    }
    steps.push_back("extract-flag " + challenge_name);
    return steps;
}

TargetStub::TargetStub(orch::Challenge challenge)
    : challenge_(std::move(challenge)), steps_(unlock_sequence(challenge_.name)) {}

void TargetStub::attach(orch::Environment& env) {
    env.set_command_handler(
        [this, &env](const std::string& command) { return handle(env, command); });
}

std::optional<orch::ExecResult> TargetStub::handle(orch::Environment& env,
                                                  const std::string& command) {
    if (command == "launch") {
        const auto encoded = env.get_env(orch::kEntryVar);
        std::string decoded;
        try {
            if (encoded) decoded = orch::base64_decode(*encoded);
        } catch (const orch::EnvError&) {
            decoded.clear();
        }
        if (decoded != challenge_.entry_command)
            return orch::ExecResult{1, "refusing to start: entry command mismatch\n"};
        launched_ = true;
        return orch::ExecResult{0, "service ready\n"};
    }

    if (command.rfind("cat ", 0) == 0) {
        const std::string path = command.substr(4);
        switch (env.stat_file(path)) {
            case orch::FileState::Absent:
                return orch::ExecResult{1, "cat: " + path + ": No such file or directory\n"};
            case orch::FileState::Unreadable:
                return orch::ExecResult{1, "cat: " + path + ": Permission denied\n"};
            case orch::FileState::Readable:
                return orch::ExecResult{0, *env.read_file(path)};
        }
    }

    for (size_t i = 0; i < steps_.size(); ++i) {
        if (command != steps_[i]) continue;
        if (!launched_) return orch::ExecResult{1, "connection refused\n"};
        if (i != progress_) {
            progress_ = 0;
            return orch::ExecResult{1, "unexpected state; connection reset\n"};
        }
        ++progress_;
        if (progress_ == steps_.size()) {
            progress_ = 0;
            return orch::ExecResult{0, challenge_.literal_flag + "\n"};
        }
        return orch::ExecResult{0, "stage " + std::to_string(progress_) + " ok\n"};
    }

    return std::nullopt;
}

} // namespace csi::sim
