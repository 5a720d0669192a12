#include "csi/orch/challenge.hpp"

#include <fstream>
#include <stdexcept>

namespace csi::orch {

nlohmann::json Challenge::to_json() const {
    return {
        {"name", name},
        {"category", category},
        {"tier", tier},
        {"est_time_minutes", est_time_minutes},
        {"flag_pattern", flag_pattern},
        {"literal_flag", literal_flag},
        {"entry_command", entry_command},
        {"known_flag_paths", known_flag_paths},
    };
}

Challenge Challenge::from_json(const nlohmann::json& j) {
    Challenge c;
    c.name = j.at("name").get<std::string>();
    c.category = j.value("category", "misc");
    c.tier = j.value("tier", "medium");
    c.est_time_minutes = j.value("est_time_minutes", 30.0);
    c.flag_pattern = j.value("flag_pattern", "HTB\\{[^}]{1,200}\\}");
    c.literal_flag = j.value("literal_flag", "");
    c.entry_command = j.value("entry_command", "");
    if (j.contains("known_flag_paths"))
        c.known_flag_paths = j["known_flag_paths"].get<std::vector<std::string>>();
    return c;
}

SuiteManifest SuiteManifest::from_json(const nlohmann::json& j) {
    SuiteManifest m;
    for (const auto& jc : j.at("challenges")) m.challenges.push_back(Challenge::from_json(jc));
    return m;
}

SuiteManifest SuiteManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read suite manifest " + path);
    return from_json(nlohmann::json::parse(in));
}

nlohmann::json SuiteManifest::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const Challenge& c : challenges) arr.push_back(c.to_json());
    return {{"challenges", arr}};
}

const Challenge* SuiteManifest::find(const std::string& name) const {
    for (const Challenge& c : challenges)
        if (c.name == name) return &c;
    return nullptr;
}

} // namespace csi::orch
