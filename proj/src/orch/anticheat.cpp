#include "csi/orch/anticheat.hpp"

#include <random>

namespace csi::orch {

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::string& raw) {
    std::string out;
    out.reserve((raw.size() + 2) / 3 * 4);
    size_t i = 0;
    while (i + 3 <= raw.size()) {
        unsigned v = (static_cast<unsigned char>(raw[i]) << 16) |
                     (static_cast<unsigned char>(raw[i + 1]) << 8) |
                     static_cast<unsigned char>(raw[i + 2]);
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += kAlphabet[v & 63];
        i += 3;
    }
    size_t rest = raw.size() - i;
    if (rest == 1) {
        unsigned v = static_cast<unsigned char>(raw[i]) << 16;
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += "==";
    } else if (rest == 2) {
        unsigned v = (static_cast<unsigned char>(raw[i]) << 16) |
                     (static_cast<unsigned char>(raw[i + 1]) << 8);
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::string base64_decode(const std::string& encoded) {
    auto value_of = [](char c) -> int {
        const char* p = std::char_traits<char>::find(kAlphabet, 64, c);
        return p ? static_cast<int>(p - kAlphabet) : -1;
    };
    if (encoded.size() % 4 != 0) throw EnvError("base64: length not a multiple of 4");
    std::string out;
    out.reserve(encoded.size() / 4 * 3);
    for (size_t i = 0; i < encoded.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (int k = 0; k < 4; ++k) {
            char c = encoded[i + k];
            if (c == '=') {
                if (i + 4 != encoded.size() || k < 2) throw EnvError("base64: bad padding");
                vals[k] = 0;
                pad += 1;
            } else {
                if (pad > 0) throw EnvError("base64: data after padding");
                vals[k] = value_of(c);
                if (vals[k] < 0) throw EnvError("base64: bad character");
            }
        }
        unsigned v = (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3];
        out += static_cast<char>((v >> 16) & 0xff);
        if (pad < 2) out += static_cast<char>((v >> 8) & 0xff);
        if (pad < 1) out += static_cast<char>(v & 0xff);
    }
    return out;
}

void provision_target(Environment& env, const Challenge& challenge, unsigned seed) {
    env.write_file(kMetadataPath, challenge.to_json().dump(2) + "\n");
    for (const auto& path : challenge.known_flag_paths)
        env.write_file(path, "FLAG: " + challenge.literal_flag + "\n");

    // Seeded decoys: stray copies of the flag the hardening pass must find.
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> count_dist(1, 4);
    const char* nests[] = {"/var/tmp", "/home/user/.cache", "/opt/notes", "/srv/backup"};
    int decoys = count_dist(rng);
    for (int i = 0; i < decoys; ++i) {
        const char* nest = nests[rng() % 4];
        std::string path = std::string(nest) + "/stash_" + std::to_string(rng() % 1000) + "_" +
                           std::to_string(i) + ".txt";
        env.write_file(path, "scratch notes\n" + challenge.literal_flag + "\nmore notes\n");
    }

    // Benign content that must survive the pass untouched.
    env.write_file("/usr/src/app/README.md",
                   "# " + challenge.name + "\nservice notes, no secrets here\n");
    env.write_file("/etc/motd", "welcome\n");
}

void prepare_anticheat(Environment& env, const Challenge& challenge) {
    env.make_unreadable(kMetadataPath);
    env.set_env(kEntryVar, base64_encode(challenge.entry_command));
    for (const auto& path : challenge.known_flag_paths) env.remove_file(path);
    for (const auto& path : env.list_files()) {
        auto content = env.read_file(path);
        if (content && content->find(challenge.literal_flag) != std::string::npos)
            env.remove_file(path);
    }
}

std::vector<std::string> readable_flag_copies(Environment& env, const std::string& literal_flag) {
    std::vector<std::string> hits;
    for (const auto& path : env.list_files()) {
        auto content = env.read_file(path);
        if (content && content->find(literal_flag) != std::string::npos) hits.push_back(path);
    }
    return hits;
}

} // namespace csi::orch
