#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace csi::proxy {

/// One proxied (or blocked) request, as a row in the cost ledger.
struct LedgerEntry {
    std::string timestamp;    // RFC3339 UTC
    std::string scaffold_id;
    std::string session_id;
    std::string challenge_id;
    std::string dialect;      // inbound dialect tag
    std::string model_id;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::int64_t cost_e4 = 0; // USD in 1e-4 units; serialized as "0.4155"
    std::int64_t latency_ms = 0;
    bool blocked = false;
    std::string warning;      // empty when clean

    nlohmann::json to_json() const;
    static LedgerEntry from_json(const nlohmann::json& j);
};

/// Append-only JSONL writer. Every entry is written with a single O_APPEND
/// write and flushed before append() returns, so concurrent writers interleave
/// whole lines and a crash costs at most the entry in flight.
class LedgerWriter {
public:
    explicit LedgerWriter(std::string path);
    ~LedgerWriter();

    LedgerWriter(const LedgerWriter&) = delete;
    LedgerWriter& operator=(const LedgerWriter&) = delete;

    void append(const LedgerEntry& entry);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    int fd_ = -1;
    std::mutex mutex_;
};

std::vector<LedgerEntry> read_ledger(const std::string& path);

} // namespace csi::proxy
