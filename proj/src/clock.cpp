#include "csi/clock.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace csi {

TimeMs SystemClock::now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string rfc3339_utc(TimeMs t) {
    const std::time_t secs = static_cast<std::time_t>(t / 1000);
    const int ms = static_cast<int>(t % 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
    return buf;
}

TimeMs parse_rfc3339(const std::string& s) {
    std::tm tm{};
    int ms = 0;
    char frac[8] = {0};
    int n = std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d.%3[0-9]Z", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                        &tm.tm_hour, &tm.tm_min, &tm.tm_sec, frac);
    if (n == 7) {
        ms = std::atoi(frac);
        if (frac[1] == 0) ms *= 100;        // ".2" -> 200
        else if (frac[2] == 0) ms *= 10;    // ".25" -> 250
    } else if (n != 6) {
        throw std::invalid_argument("not an RFC3339 timestamp: " + s);
    }
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    const std::time_t secs = timegm(&tm);
    return static_cast<TimeMs>(secs) * 1000 + ms;
}

} // namespace csi
