#pragma once

#include <cstdint>
#include <string>

#include "csi/wire/canonical.hpp"

namespace csi::proxy {

/// Flat per-token pricing: one USD figure per million combined
/// (input + output) tokens.
struct CostRate {
    double usd_per_million = 5.0;
};

/// Cost in ten-thousandths of a USD (4 decimal places), rounded half-even.
/// Integer representation keeps ledger sums exact.
std::int64_t compute_cost_e4(const wire::TokenUsage& usage, const CostRate& rate);

/// Same figure as a double in USD.
double compute_cost(const wire::TokenUsage& usage, const CostRate& rate);

/// Render an e4 amount as a fixed 4-decimal string, e.g. 4155 -> "0.4155".
std::string format_usd_e4(std::int64_t cost_e4);

/// Parse a fixed 4-decimal string back to e4 units.
std::int64_t parse_usd_e4(const std::string& s);

} // namespace csi::proxy
