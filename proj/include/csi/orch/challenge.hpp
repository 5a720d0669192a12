#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace csi::orch {

/// One CTF challenge as the orchestrator sees it.
struct Challenge {
    std::string name;
    std::string category;                      // crypto, forensics, misc, pwn, reversing, web
    std::string tier;                          // very-easy .. very-hard
    double est_time_minutes = 30;              // per-session budget
    std::string flag_pattern;                  // regex the detector scans for
    std::string literal_flag;                  // ground truth for verification
    std::string entry_command;                 // how the target comes up
    std::vector<std::string> known_flag_paths; // scrubbed before launch

    nlohmann::json to_json() const;
    static Challenge from_json(const nlohmann::json& j);
};

struct SuiteManifest {
    std::vector<Challenge> challenges;

    static SuiteManifest from_json(const nlohmann::json& j);
    static SuiteManifest load(const std::string& path);
    nlohmann::json to_json() const;

    const Challenge* find(const std::string& name) const;
};

} // namespace csi::orch
