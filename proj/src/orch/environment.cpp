#include "csi/orch/environment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/stat.h>

namespace csi::orch {

namespace fs = std::filesystem;

LocalEnvironment::LocalEnvironment(std::string root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw EnvError("cannot create environment root " + root_ + ": " + ec.message());
}

LocalEnvironment::~LocalEnvironment() {
    std::error_code ec;
    fs::remove_all(root_, ec);
}

std::string LocalEnvironment::real_path(const std::string& virtual_path) const {
    if (virtual_path.empty() || virtual_path[0] != '/')
        throw EnvError("environment paths must be absolute: " + virtual_path);
    if (virtual_path.find("..") != std::string::npos)
        throw EnvError("environment paths may not contain '..': " + virtual_path);
    return root_ + virtual_path;
}

void LocalEnvironment::write_file(const std::string& path, const std::string& content) {
    auto real = real_path(path);
    std::error_code ec;
    fs::create_directories(fs::path(real).parent_path(), ec);
    if (ec) throw EnvError("cannot create parent of " + path + ": " + ec.message());
    std::ofstream out(real, std::ios::binary | std::ios::trunc);
    if (!out) throw EnvError("cannot write " + path);
    out << content;
    out.close();
    ::chmod(real.c_str(), 0644);
}

FileState LocalEnvironment::stat_file(const std::string& path) {
    struct ::stat st{};
    if (::stat(real_path(path).c_str(), &st) != 0 || !S_ISREG(st.st_mode))
        return FileState::Absent;
    return (st.st_mode & 0444) ? FileState::Readable : FileState::Unreadable;
}

std::optional<std::string> LocalEnvironment::read_file(const std::string& path) {
    if (stat_file(path) != FileState::Readable) return std::nullopt;
    std::ifstream in(real_path(path), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void LocalEnvironment::make_unreadable(const std::string& path) {
    if (stat_file(path) == FileState::Absent)
        throw EnvError("cannot chmod missing file " + path);
    if (::chmod(real_path(path).c_str(), 0) != 0) throw EnvError("chmod 000 failed on " + path);
}

bool LocalEnvironment::remove_file(const std::string& path) {
    std::error_code ec;
    bool removed = fs::remove(real_path(path), ec);
    if (ec) throw EnvError("cannot remove " + path + ": " + ec.message());
    return removed;
}

std::vector<std::string> LocalEnvironment::list_files() {
    std::vector<std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root_)) {
        if (!entry.is_regular_file()) continue;
        out.push_back(entry.path().string().substr(root_.size()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

void LocalEnvironment::set_env(const std::string& key, const std::string& value) {
    env_[key] = value;
}

std::optional<std::string> LocalEnvironment::get_env(const std::string& key) const {
    auto it = env_.find(key);
    if (it == env_.end()) return std::nullopt;
    return it->second;
}

ExecResult LocalEnvironment::exec(const std::string& command) {
    commands_ += 1;
    ExecResult result;
    std::optional<ExecResult> handled;
    if (handler_) handled = handler_(command);
    if (handled) {
        result = *handled;
    } else if (command == "false") {
        result = {1, ""};
    } else {
        result = {0, "ok\n"};
    }
    if (result.exit_code != 0) errors_ += 1;
    return result;
}

void LocalEnvironment::set_command_handler(CommandHandler handler) {
    handler_ = std::move(handler);
}

} // namespace csi::orch
