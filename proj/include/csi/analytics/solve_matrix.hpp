#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csi/orch/record.hpp"

namespace csi::analytics {

/// Challenge x scaffold boolean outcome grid. Column order is load order and
/// is preserved through every downstream computation.
struct SolveMatrix {
    std::vector<std::string> scaffolds;       // columns
    std::vector<std::string> challenges;      // rows
    std::vector<std::vector<bool>> cells;     // [row][column]

    size_t rows() const { return challenges.size(); }
    size_t cols() const { return scaffolds.size(); }
    bool solved(size_t row, size_t col) const { return cells[row][col]; }

    /// Bitmask over columns of who solved this row.
    std::uint32_t row_mask(size_t row) const;

    /// Union size across a subset of columns.
    size_t union_count(std::uint32_t member_mask) const;

    /// CSV: header "challenge,<id>,...", cells Y/N.
    static SolveMatrix from_csv(const std::string& text);
    static SolveMatrix load_csv(const std::string& path);
    std::string to_csv() const;

    /// Build from campaign records (any mode); a challenge/scaffold pair is
    /// solved when any of its records says so. Row order follows `suite_order`
    /// when given, else first appearance.
    static SolveMatrix from_records(const std::vector<orch::RunRecord>& records,
                                    const std::vector<std::string>& scaffold_order,
                                    const std::vector<std::string>& suite_order = {});
};

} // namespace csi::analytics
