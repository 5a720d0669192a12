#include "csi/orch/flag_detect.hpp"

namespace csi::orch {

FlagDetector::FlagDetector(const std::string& pattern, size_t max_flag_len)
    : re_(pattern), max_flag_len_(max_flag_len == 0 ? 1 : max_flag_len) {}

std::optional<std::string> FlagDetector::feed(const std::string& chunk) {
    std::string buf = carry_ + chunk;
    std::smatch m;
    if (std::regex_search(buf, m, re_)) {
        carry_ = buf.substr(m.position(0) + m.length(0));
        if (carry_.size() > max_flag_len_ - 1)
            carry_.erase(0, carry_.size() - (max_flag_len_ - 1));
        return m.str(0);
    }
    if (buf.size() > max_flag_len_ - 1) buf.erase(0, buf.size() - (max_flag_len_ - 1));
    carry_ = std::move(buf);
    return std::nullopt;
}

} // namespace csi::orch
