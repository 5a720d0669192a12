#include "csi/orch/record.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "csi/proxy/cost.hpp"

namespace csi::orch {

nlohmann::json RunRecord::to_json() const {
    return {
        {"challenge", challenge},
        {"scaffold", scaffold},
        {"mode", mode},
        {"session", session_id},
        {"solved", solved},
        {"flag", flag},
        {"winner", winner},
        {"duration_s", duration_s},
        {"input_tokens", input_tokens},
        {"output_tokens", output_tokens},
        {"cost_usd", proxy::format_usd_e4(cost_e4)},
        {"commands", commands},
        {"errors", errors},
        {"turns", turns},
        {"injections", injections},
        {"started_at", started_at},
    };
}

RunRecord RunRecord::from_json(const nlohmann::json& j) {
    RunRecord r;
    r.challenge = j.at("challenge").get<std::string>();
    r.scaffold = j.at("scaffold").get<std::string>();
    r.mode = j.value("mode", "independent");
    r.session_id = j.value("session", "");
    r.solved = j.value("solved", false);
    r.flag = j.value("flag", "");
    r.winner = j.value("winner", false);
    r.duration_s = j.value("duration_s", 0.0);
    r.input_tokens = j.value("input_tokens", std::int64_t{0});
    r.output_tokens = j.value("output_tokens", std::int64_t{0});
    r.cost_e4 = proxy::parse_usd_e4(j.value("cost_usd", std::string("0")));
    r.commands = j.value("commands", std::int64_t{0});
    r.errors = j.value("errors", std::int64_t{0});
    r.turns = j.value("turns", std::int64_t{0});
    r.injections = j.value("injections", std::int64_t{0});
    r.started_at = j.value("started_at", "");
    return r;
}

RecordWriter::RecordWriter(std::string path) : path_(std::move(path)) {
    // Seed idempotence from whatever is already on disk.
    std::ifstream in(path_);
    if (in.good()) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (!j.is_discarded()) seen_.insert(RunRecord::from_json(j).key());
        }
    }
    fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd_ < 0)
        throw std::runtime_error("cannot open records file " + path_ + ": " + std::strerror(errno));
}

RecordWriter::~RecordWriter() {
    if (fd_ >= 0) ::close(fd_);
}

bool RecordWriter::emit(const RunRecord& record) {
    if (!seen_.insert(record.key()).second) return false;
    const std::string line = record.to_json().dump() + "\n";
    size_t off = 0;
    while (off < line.size()) {
        const ssize_t n = ::write(fd_, line.data() + off, line.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw std::runtime_error("record write failed: " + std::string(std::strerror(errno)));
        }
        off += static_cast<size_t>(n);
    }
    ::fsync(fd_);
    return true;
}

std::vector<RunRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read records " + path);
    std::vector<RunRecord> records;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("corrupt record line " + std::to_string(lineno) + " in " + path);
        records.push_back(RunRecord::from_json(j));
    }
    return records;
}

} // namespace csi::orch
