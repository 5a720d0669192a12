#include "csi/proxy/ledger.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "csi/proxy/cost.hpp"

namespace csi::proxy {

nlohmann::json LedgerEntry::to_json() const {
    nlohmann::json j{
        {"ts", timestamp},
        {"scaffold", scaffold_id},
        {"session", session_id},
        {"challenge", challenge_id},
        {"dialect", dialect},
        {"model", model_id},
        {"input_tokens", input_tokens},
        {"output_tokens", output_tokens},
        {"cost_usd", format_usd_e4(cost_e4)},
        {"latency_ms", latency_ms},
        {"blocked", blocked},
    };
    if (!warning.empty()) j["warning"] = warning;
    return j;
}

LedgerEntry LedgerEntry::from_json(const nlohmann::json& j) {
    LedgerEntry e;
    e.timestamp = j.value("ts", "");
    e.scaffold_id = j.value("scaffold", "");
    e.session_id = j.value("session", "");
    e.challenge_id = j.value("challenge", "");
    e.dialect = j.value("dialect", "");
    e.model_id = j.value("model", "");
    e.input_tokens = j.value("input_tokens", std::int64_t{0});
    e.output_tokens = j.value("output_tokens", std::int64_t{0});
    e.cost_e4 = parse_usd_e4(j.value("cost_usd", std::string("0.0000")));
    e.latency_ms = j.value("latency_ms", std::int64_t{0});
    e.blocked = j.value("blocked", false);
    e.warning = j.value("warning", "");
    return e;
}

LedgerWriter::LedgerWriter(std::string path) : path_(std::move(path)) {
    fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd_ < 0)
        throw std::runtime_error("cannot open ledger " + path_ + ": " + std::strerror(errno));
}

LedgerWriter::~LedgerWriter() {
    if (fd_ >= 0) ::close(fd_);
}

void LedgerWriter::append(const LedgerEntry& entry) {
    const std::string line = entry.to_json().dump() + "\n";
    std::lock_guard<std::mutex> lock(mutex_);
    size_t off = 0;
    while (off < line.size()) {
        const ssize_t n = ::write(fd_, line.data() + off, line.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw std::runtime_error("ledger write failed: " + std::string(std::strerror(errno)));
        }
        off += static_cast<size_t>(n);
    }
    ::fsync(fd_);
}

std::vector<LedgerEntry> read_ledger(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read ledger " + path);
    std::vector<LedgerEntry> entries;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("corrupt ledger line " + std::to_string(lineno) + " in " + path);
        entries.push_back(LedgerEntry::from_json(j));
    }
    return entries;
}

} // namespace csi::proxy
