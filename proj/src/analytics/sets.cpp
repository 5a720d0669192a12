#include "csi/analytics/sets.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace csi::analytics {

SetMetrics set_metrics(const SolveMatrix& m) {
    SetMetrics out;
    out.scaffolds = m.scaffolds;
    out.solve_counts.assign(m.cols(), 0);
    out.exclusive_counts.assign(m.cols(), 0);
    out.exclusive_challenges.assign(m.cols(), {});
    const std::uint32_t all = m.cols() >= 32 ? ~0u : (1u << m.cols()) - 1;
    for (size_t r = 0; r < m.rows(); ++r) {
        const std::uint32_t mask = m.row_mask(r);
        for (size_t c = 0; c < m.cols(); ++c)
            if (mask & (1u << c)) ++out.solve_counts[c];
        if (mask != 0) {
            ++out.union_count;
            out.union_challenges.push_back(m.challenges[r]);
        }
        if (mask == all && all != 0) {
            ++out.core_count;
            out.core_challenges.push_back(m.challenges[r]);
        }
        if (std::popcount(mask) == 1) {
            const size_t c = static_cast<size_t>(std::countr_zero(mask));
            ++out.exclusive_counts[c];
            out.exclusive_challenges[c].push_back(m.challenges[r]);
        }
    }
    return out;
}

SubsetBreakdown subset_breakdown(const SolveMatrix& m) {
    SubsetBreakdown out;
    out.k_distribution.assign(m.cols() + 1, 0);
    for (size_t r = 0; r < m.rows(); ++r) {
        const std::uint32_t mask = m.row_mask(r);
        out.exact[mask].push_back(m.challenges[r]);
        ++out.k_distribution[static_cast<size_t>(std::popcount(mask))];
    }
    return out;
}

std::vector<std::string> mask_members(const SolveMatrix& m, std::uint32_t mask) {
    std::vector<std::string> members;
    for (size_t c = 0; c < m.cols(); ++c)
        if (mask & (1u << c)) members.push_back(m.scaffolds[c]);
    std::sort(members.begin(), members.end());
    return members;
}

std::vector<EnsembleStep> greedy_ensemble(const SolveMatrix& m) {
    const size_t n = m.cols();
    if (n == 0 || n > 20) throw std::invalid_argument("ensemble expects 1..20 scaffolds");
    std::vector<EnsembleStep> curve;
    for (size_t k = 1; k <= n; ++k) {
        bool have = false;
        EnsembleStep best;
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            if (static_cast<size_t>(std::popcount(mask)) != k) continue;
            const size_t u = m.union_count(mask);
            std::vector<std::string> members = mask_members(m, mask);
            if (!have || u > best.union_count ||
                (u == best.union_count && members < best.members)) {
                best = {k, std::move(members), u};
                have = true;
            }
        }
        curve.push_back(std::move(best));
    }
    return curve;
}

std::vector<ParetoPoint> pareto_frontier(const SolveMatrix& m,
                                         const std::map<std::string, double>& scaffold_cost) {
    const size_t n = m.cols();
    if (n == 0 || n > 20) throw std::invalid_argument("pareto expects 1..20 scaffolds");
    std::vector<double> cost(n, 0);
    for (size_t c = 0; c < n; ++c) {
        auto it = scaffold_cost.find(m.scaffolds[c]);
        if (it == scaffold_cost.end())
            throw std::invalid_argument("no cost for scaffold '" + m.scaffolds[c] + "'");
        cost[c] = it->second;
    }

    struct Candidate {
        std::uint32_t mask;
        double cost;
        size_t u;
    };
    std::vector<Candidate> all;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double total = 0;
        for (size_t c = 0; c < n; ++c)
            if (mask & (1u << c)) total += cost[c];
        all.push_back({mask, total, m.union_count(mask)});
    }

    std::vector<ParetoPoint> frontier;
    for (const Candidate& a : all) {
        bool dominated = false;
        for (const Candidate& b : all) {
            if (b.mask == a.mask) continue;
            if (b.cost <= a.cost && b.u >= a.u && (b.cost < a.cost || b.u > a.u)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) frontier.push_back({mask_members(m, a.mask), a.cost, a.u});
    }
    std::sort(frontier.begin(), frontier.end(), [](const ParetoPoint& x, const ParetoPoint& y) {
        if (x.cost != y.cost) return x.cost < y.cost;
        if (x.union_count != y.union_count) return x.union_count < y.union_count;
        return x.members < y.members;
    });
    return frontier;
}

JaccardMatrix jaccard_matrix(const SolveMatrix& m) {
    JaccardMatrix out;
    out.scaffolds = m.scaffolds;
    const size_t n = m.cols();
    out.j.assign(n, std::vector<double>(n, 0));
    out.intersection.assign(n, std::vector<size_t>(n, 0));
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) {
            size_t inter = 0, uni = 0;
            for (size_t r = 0; r < m.rows(); ++r) {
                const bool x = m.cells[r][a], y = m.cells[r][b];
                if (x && y) ++inter;
                if (x || y) ++uni;
            }
            out.intersection[a][b] = inter;
            out.j[a][b] = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
        }
    }
    return out;
}

} // namespace csi::analytics
