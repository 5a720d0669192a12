#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csi/proxy/ledger.hpp"

namespace csi::analytics {

/// One API request inside a session, in arrival order.
struct TokenPoint {
    std::int64_t request_index = 0; // 1-based within the session
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::int64_t cumulative_input = 0;
    std::int64_t cumulative_output = 0;
};

/// Context-growth trajectory for one session, built from non-blocked ledger
/// rows in file order. Rows without a session id land in a synthetic
/// "(unattributed)" profile per scaffold.
struct TokenProfile {
    std::string scaffold;
    std::string session;
    std::string challenge;
    std::vector<TokenPoint> points;
    std::int64_t total_input = 0;
    std::int64_t total_output = 0;
    std::int64_t peak_input = 0; // largest single-request context
};

std::vector<TokenProfile> token_profiles(const std::vector<proxy::LedgerEntry>& ledger);

/// True when each request's input-token count is >= the previous one
/// (a growing-context agent that never truncates).
bool monotone_context(const TokenProfile& profile);

} // namespace csi::analytics
