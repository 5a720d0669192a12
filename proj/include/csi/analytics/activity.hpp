#pragma once

#include <string>
#include <vector>

#include "csi/orch/record.hpp"

namespace csi::analytics {

/// Shared-board participation counts for one scaffold, summed across boards.
struct ActivityRow {
    std::string scaffold;
    std::int64_t reads = 0;
    std::int64_t lines_read = 0;
    std::int64_t writes = 0;
    std::int64_t posts = 0;
    std::int64_t wins = 0; // races where this scaffold produced the accepted flag
};

struct ActivityReport {
    std::vector<ActivityRow> rows; // in scaffold_ids order
    ActivityRow total;             // scaffold == "total"
};

/// Tally read/write events from each board's activity sidecar
/// (`<board>.events.jsonl`) and wins from the run records. Boards that were
/// never touched simply contribute nothing; a missing sidecar is not an error.
ActivityReport activity_report(const std::vector<orch::RunRecord>& records,
                               const std::vector<std::string>& board_files,
                               const std::vector<std::string>& scaffold_ids);

} // namespace csi::analytics
