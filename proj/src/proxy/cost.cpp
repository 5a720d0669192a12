#include "csi/proxy/cost.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace csi::proxy {

std::int64_t compute_cost_e4(const wire::TokenUsage& usage, const CostRate& rate) {
    // USD = rate * tokens / 1e6; e4 units = rate * tokens / 1e2.
    const double raw = rate.usd_per_million * static_cast<double>(usage.combined()) / 100.0;
    // nearbyint under the default FE_TONEAREST mode is round-half-to-even.
    return static_cast<std::int64_t>(std::nearbyint(raw));
}

double compute_cost(const wire::TokenUsage& usage, const CostRate& rate) {
    return static_cast<double>(compute_cost_e4(usage, rate)) / 1e4;
}

std::string format_usd_e4(std::int64_t cost_e4) {
    const bool neg = cost_e4 < 0;
    const std::int64_t abs = neg ? -cost_e4 : cost_e4;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%s%lld.%04lld", neg ? "-" : "",
                  static_cast<long long>(abs / 10000), static_cast<long long>(abs % 10000));
    return buf;
}

std::int64_t parse_usd_e4(const std::string& s) {
    const size_t dot = s.find('.');
    const std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (frac.size() > 4) throw std::invalid_argument("more than 4 decimal places: " + s);
    while (frac.size() < 4) frac += '0';
    const bool neg = !whole.empty() && whole[0] == '-';
    const std::int64_t w = std::stoll(whole.empty() || whole == "-" ? "0" : whole);
    const std::int64_t f = std::stoll(frac.empty() ? "0" : frac);
    const std::int64_t abs = (neg ? -w : w) * 10000 + f;
    return neg ? -abs : abs;
}

} // namespace csi::proxy
