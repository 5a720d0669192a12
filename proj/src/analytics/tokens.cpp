#include "csi/analytics/tokens.hpp"

#include <map>

namespace csi::analytics {

std::vector<TokenProfile> token_profiles(const std::vector<proxy::LedgerEntry>& ledger) {
    std::vector<TokenProfile> out;
    std::map<std::pair<std::string, std::string>, size_t> index;
    for (const auto& e : ledger) {
        if (e.blocked) continue;
        std::string session = e.session_id.empty() ? "(unattributed)" : e.session_id;
        auto key = std::make_pair(e.scaffold_id, session);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            TokenProfile p;
            p.scaffold = e.scaffold_id;
            p.session = session;
            p.challenge = e.challenge_id;
            out.push_back(std::move(p));
        }
        auto& prof = out[it->second];
        if (prof.challenge.empty()) prof.challenge = e.challenge_id;
        TokenPoint pt;
        pt.request_index = static_cast<std::int64_t>(prof.points.size()) + 1;
        pt.input_tokens = e.input_tokens;
        pt.output_tokens = e.output_tokens;
        prof.total_input += e.input_tokens;
        prof.total_output += e.output_tokens;
        pt.cumulative_input = prof.total_input;
        pt.cumulative_output = prof.total_output;
        prof.peak_input = std::max(prof.peak_input, e.input_tokens);
        prof.points.push_back(pt);
    }
    return out;
}

bool monotone_context(const TokenProfile& profile) {
    for (size_t i = 1; i < profile.points.size(); ++i)
        if (profile.points[i].input_tokens < profile.points[i - 1].input_tokens) return false;
    return true;
}

} // namespace csi::analytics
