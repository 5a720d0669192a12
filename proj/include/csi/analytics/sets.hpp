#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "csi/analytics/solve_matrix.hpp"

namespace csi::analytics {

/// Per-scaffold solve sets plus the union/core/exclusive decomposition.
struct SetMetrics {
    std::vector<std::string> scaffolds;
    std::vector<size_t> solve_counts;                       // |S_i|
    size_t union_count = 0;                                 // |∪ S_i|
    size_t core_count = 0;                                  // |∩ S_i|
    std::vector<size_t> exclusive_counts;                   // solved by i alone
    std::vector<std::string> union_challenges;
    std::vector<std::string> core_challenges;
    std::vector<std::vector<std::string>> exclusive_challenges;
};

SetMetrics set_metrics(const SolveMatrix& m);

/// Which exact scaffold subset solved each challenge, keyed by column
/// bitmask, plus the how-many-solvers histogram.
struct SubsetBreakdown {
    std::map<std::uint32_t, std::vector<std::string>> exact; // mask -> challenges
    std::vector<size_t> k_distribution;                      // index k = #challenges with k solvers
};

SubsetBreakdown subset_breakdown(const SolveMatrix& m);

std::vector<std::string> mask_members(const SolveMatrix& m, std::uint32_t mask);

/// Best ensemble of each size, by exhaustive subset enumeration (exact for
/// the handful of scaffolds this tool sees). Ties break toward the
/// lexicographically smallest sorted member-id list.
struct EnsembleStep {
    size_t k = 0;
    std::vector<std::string> members; // sorted ids
    size_t union_count = 0;
};

std::vector<EnsembleStep> greedy_ensemble(const SolveMatrix& m);

/// Cost/coverage frontier over all 2^n - 1 non-empty scaffold subsets.
/// A subset survives when no other subset has cost <= and union >= with one
/// strict. Sorted by ascending cost.
struct ParetoPoint {
    std::vector<std::string> members; // sorted ids
    double cost = 0;                  // sum of member costs
    size_t union_count = 0;
};

std::vector<ParetoPoint> pareto_frontier(const SolveMatrix& m,
                                         const std::map<std::string, double>& scaffold_cost);

/// Pairwise overlap: J = |A∩B| / |A∪B|, defined as 1 when both sets are
/// empty. Intersection sizes ride along for reporting.
struct JaccardMatrix {
    std::vector<std::string> scaffolds;
    std::vector<std::vector<double>> j;
    std::vector<std::vector<size_t>> intersection;
};

JaccardMatrix jaccard_matrix(const SolveMatrix& m);

} // namespace csi::analytics
