#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

namespace csi {

/// Milliseconds since the Unix epoch, UTC.
using TimeMs = std::int64_t;

/// Injectable time source. Campaign machinery never reads wall time directly;
/// everything goes through one of these so simulated runs are reproducible.
class Clock {
public:
    virtual ~Clock() = default;
    virtual TimeMs now_ms() = 0;
};

class SystemClock final : public Clock {
public:
    TimeMs now_ms() override;
};

/// Manually driven clock for simulations and tests.
class ManualClock final : public Clock {
public:
    explicit ManualClock(TimeMs start_ms = 0) : now_(start_ms) {}
    TimeMs now_ms() override { return now_.load(); }
    void set_ms(TimeMs t) { now_.store(t); }
    void advance_ms(TimeMs delta) { now_.fetch_add(delta); }

private:
    std::atomic<TimeMs> now_;
};

/// RFC3339 UTC with millisecond precision, e.g. "2026-01-05T14:03:22.250Z".
std::string rfc3339_utc(TimeMs t);

/// Inverse of rfc3339_utc; also accepts whole-second stamps without a
/// fractional part.
TimeMs parse_rfc3339(const std::string& s);

} // namespace csi
