#include "csi/analytics/activity.hpp"

#include <map>

#include "csi/blackboard/substrate.hpp"

namespace csi::analytics {

ActivityReport activity_report(const std::vector<orch::RunRecord>& records,
                               const std::vector<std::string>& board_files,
                               const std::vector<std::string>& scaffold_ids) {
    ActivityReport report;
    std::map<std::string, size_t> index;
    for (const auto& id : scaffold_ids) {
        index[id] = report.rows.size();
        ActivityRow row;
        row.scaffold = id;
        report.rows.push_back(std::move(row));
    }
    report.total.scaffold = "total";

    auto bump = [&](const std::string& scaffold, auto member, std::int64_t by) {
        auto it = index.find(scaffold);
        if (it == index.end()) return; // events from unmanaged authors are ignored
        report.rows[it->second].*member += by;
        report.total.*member += by;
    };

    for (const auto& file : board_files) {
        for (const auto& ev : blackboard::read_activity_log(file + ".events.jsonl")) {
            if (ev.event == "read") {
                bump(ev.scaffold, &ActivityRow::reads, 1);
                bump(ev.scaffold, &ActivityRow::lines_read, static_cast<std::int64_t>(ev.lines));
            } else if (ev.event == "write") {
                bump(ev.scaffold, &ActivityRow::writes, 1);
                bump(ev.scaffold, &ActivityRow::posts, static_cast<std::int64_t>(ev.posts));
            }
        }
    }
    for (const auto& r : records)
        if (r.winner) bump(r.scaffold, &ActivityRow::wins, 1);
    return report;
}

} // namespace csi::analytics
