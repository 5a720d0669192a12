#pragma once

#include <map>
#include <string>
#include <vector>

#include "csi/analytics/activity.hpp"
#include "csi/analytics/rollup.hpp"
#include "csi/analytics/sets.hpp"
#include "csi/analytics/solve_matrix.hpp"
#include "csi/analytics/tokens.hpp"

namespace csi::analytics {

enum class ReportFormat { Markdown, Csv, Json };

ReportFormat report_format_from_string(const std::string& s);
std::string extension_of(ReportFormat f);

/// One rendered report: `name` is the filename (stem + extension).
struct Document {
    std::string name;
    std::string content;
};

/// Set-level reports over a solve grid: scoreboard, set metrics, subset
/// breakdown, ensemble curve, Jaccard agreement, and (when costs are given)
/// the cost/coverage frontier. Ordering is deterministic; an empty grid
/// renders explicit no-data sections.
std::vector<Document> render_solve_reports(const SolveMatrix& m,
                                           const std::map<std::string, double>& costs,
                                           ReportFormat format);

/// Run-level reports over campaign records and the cost ledger: per-scaffold
/// rollup, tier breakdown, board activity, and token profiles.
std::vector<Document> render_run_reports(const std::vector<orch::RunRecord>& records,
                                         const std::vector<proxy::LedgerEntry>& ledger,
                                         const orch::SuiteManifest& suite,
                                         const std::vector<std::string>& board_files,
                                         const std::vector<std::string>& scaffold_order,
                                         ReportFormat format);

} // namespace csi::analytics
