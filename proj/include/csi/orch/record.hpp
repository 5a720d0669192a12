#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace csi::orch {

/// Outcome of one scaffold session on one challenge.
struct RunRecord {
    std::string challenge;
    std::string scaffold;
    std::string mode;       // independent | race | blackboard
    std::string session_id;
    bool solved = false;
    std::string flag;       // verified flag text when solved
    bool winner = false;    // produced the accepted flag in a shared-mode run
    double duration_s = 0;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::int64_t cost_e4 = 0; // USD in 1e-4 units, summed from the ledger
    std::int64_t commands = 0;
    std::int64_t errors = 0;
    std::int64_t turns = 0;
    std::int64_t injections = 0;
    std::string started_at;   // RFC3339

    nlohmann::json to_json() const;
    static RunRecord from_json(const nlohmann::json& j);

    std::string key() const { return challenge + "\x1f" + scaffold + "\x1f" + mode; }
};

/// JSONL record sink, idempotent on (challenge, scaffold, mode): re-emitting
/// an already-written key is a no-op. Existing file contents seed the
/// dedup set, so reopening after a crash stays idempotent.
class RecordWriter {
public:
    explicit RecordWriter(std::string path);
    ~RecordWriter();

    /// Returns true when the record was appended, false when deduplicated.
    bool emit(const RunRecord& record);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    int fd_ = -1;
    std::set<std::string> seen_;
};

std::vector<RunRecord> read_records(const std::string& path);

} // namespace csi::orch
