#pragma once

#include <optional>
#include <regex>
#include <string>

namespace csi::orch {

/// Streaming flag scanner. Feed output chunks as they arrive; matches that
/// span chunk boundaries are caught by carrying the last max_flag_len - 1
/// bytes between feeds. Matched text is consumed, so the same flag instance
/// is reported once.
class FlagDetector {
public:
    explicit FlagDetector(const std::string& pattern, size_t max_flag_len = 256);

    /// First match in (carry + chunk), if any.
    std::optional<std::string> feed(const std::string& chunk);

private:
    std::regex re_;
    std::string carry_;
    size_t max_flag_len_;
};

} // namespace csi::orch
