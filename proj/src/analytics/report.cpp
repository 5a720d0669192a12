#include "csi/analytics/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "csi/proxy/cost.hpp"

namespace csi::analytics {

using nlohmann::json;

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "markdown" || s == "md") return ReportFormat::Markdown;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format: " + s +
                                " (expected markdown, csv, or json)");
}

std::string extension_of(ReportFormat f) {
    switch (f) {
        case ReportFormat::Markdown: return ".md";
        case ReportFormat::Csv: return ".csv";
        case ReportFormat::Json: return ".json";
    }
    return ".txt";
}

namespace {

std::string trimmed(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

/// Uniform tabular core: every report renders from one of these.
struct Table {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string to_markdown(const Table& t) {
    std::string out = "## " + t.title + "\n\n";
    if (t.rows.empty()) return out + "_no data_\n";
    out += "| " + join(t.columns, " | ") + " |\n";
    out += "|";
    for (size_t i = 0; i < t.columns.size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& row : t.rows) out += "| " + join(row, " | ") + " |\n";
    return out;
}

std::string to_csv(const Table& t) {
    std::string out = join(t.columns, ",") + "\n";
    for (const auto& row : t.rows) out += join(row, ",") + "\n";
    return out;
}

json to_json_doc(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (size_t i = 0; i < t.columns.size() && i < row.size(); ++i)
            obj[t.columns[i]] = row[i];
        rows.push_back(std::move(obj));
    }
    return json{{"title", t.title}, {"columns", t.columns}, {"rows", rows}};
}

Document render(const std::string& stem, const Table& t, ReportFormat format) {
    Document doc;
    doc.name = stem + extension_of(format);
    switch (format) {
        case ReportFormat::Markdown: doc.content = to_markdown(t); break;
        case ReportFormat::Csv: doc.content = to_csv(t); break;
        case ReportFormat::Json: doc.content = to_json_doc(t).dump(2) + "\n"; break;
    }
    return doc;
}

} // namespace

std::vector<Document> render_solve_reports(const SolveMatrix& m,
                                           const std::map<std::string, double>& costs,
                                           ReportFormat format) {
    std::vector<Document> docs;
    const auto metrics = set_metrics(m);

    Table scoreboard{"Scoreboard", {"scaffold", "solved", "attempted", "cost_usd"}, {}};
    for (size_t i = 0; i < m.scaffolds.size(); ++i) {
        auto it = costs.find(m.scaffolds[i]);
        scoreboard.rows.push_back({m.scaffolds[i], std::to_string(metrics.solve_counts[i]),
                                   std::to_string(m.rows()),
                                   it == costs.end() ? "" : trimmed(it->second)});
    }
    docs.push_back(render("scoreboard", scoreboard, format));

    Table sets{"Solve-set metrics",
               {"scaffold", "solved", "exclusive", "exclusive_challenges"},
               {}};
    for (size_t i = 0; i < m.scaffolds.size(); ++i) {
        sets.rows.push_back({m.scaffolds[i], std::to_string(metrics.solve_counts[i]),
                             std::to_string(metrics.exclusive_counts[i]),
                             join(metrics.exclusive_challenges[i], ";")});
    }
    if (!m.scaffolds.empty()) {
        sets.rows.push_back({"(union)", std::to_string(metrics.union_count), "", ""});
        sets.rows.push_back(
            {"(core)", std::to_string(metrics.core_count), "", join(metrics.core_challenges, ";")});
    }
    docs.push_back(render("set_metrics", sets, format));

    Table subsets{"Exact solver subsets", {"solvers", "count", "challenges"}, {}};
    for (const auto& [mask, challenges] : subset_breakdown(m).exact) {
        if (mask == 0) continue;
        subsets.rows.push_back({join(mask_members(m, mask), "+"),
                                std::to_string(challenges.size()), join(challenges, ";")});
    }
    std::sort(subsets.rows.begin(), subsets.rows.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    docs.push_back(render("subsets", subsets, format));

    Table ensemble{"Best ensemble by size", {"k", "members", "union"}, {}};
    if (!m.scaffolds.empty())
        for (const auto& step : greedy_ensemble(m))
            ensemble.rows.push_back({std::to_string(step.k), join(step.members, "+"),
                                     std::to_string(step.union_count)});
    docs.push_back(render("ensemble", ensemble, format));

    Table jaccard{"Pairwise agreement", {"a", "b", "jaccard", "intersection"}, {}};
    const auto jm = jaccard_matrix(m);
    for (size_t a = 0; a < jm.scaffolds.size(); ++a) {
        for (size_t b = a + 1; b < jm.scaffolds.size(); ++b) {
            std::ostringstream jv;
            jv.precision(4);
            jv << std::fixed << jm.j[a][b];
            jaccard.rows.push_back({jm.scaffolds[a], jm.scaffolds[b], jv.str(),
                                    std::to_string(jm.intersection[a][b])});
        }
    }
    docs.push_back(render("jaccard", jaccard, format));

    if (!costs.empty()) {
        Table pareto{"Cost/coverage frontier", {"cost_usd", "union", "members"}, {}};
        if (!m.scaffolds.empty())
            for (const auto& point : pareto_frontier(m, costs))
                pareto.rows.push_back({trimmed(point.cost), std::to_string(point.union_count),
                                       join(point.members, "+")});
        docs.push_back(render("pareto", pareto, format));
    }
    return docs;
}

std::vector<Document> render_run_reports(const std::vector<orch::RunRecord>& records,
                                         const std::vector<proxy::LedgerEntry>& ledger,
                                         const orch::SuiteManifest& suite,
                                         const std::vector<std::string>& board_files,
                                         const std::vector<std::string>& scaffold_order,
                                         ReportFormat format) {
    std::vector<Document> docs;
    const auto rollups = rollup(records, ledger, suite);

    Table score{"Campaign rollup",
                {"scaffold", "solved", "attempted", "cost_usd", "cost_per_solve_usd",
                 "wall_hours", "commands", "errors", "input_tokens", "output_tokens"},
                {}};
    for (const auto& r : rollups) {
        std::ostringstream hours;
        hours.precision(2);
        hours << std::fixed << r.wall_hours;
        score.rows.push_back(
            {r.scaffold, std::to_string(r.solved), std::to_string(r.attempted),
             proxy::format_usd_e4(r.cost_e4),
             r.cost_per_solve_usd ? std::to_string(*r.cost_per_solve_usd) : "",
             hours.str(), std::to_string(r.commands), std::to_string(r.errors),
             std::to_string(r.input_tokens), std::to_string(r.output_tokens)});
    }
    docs.push_back(render("rollup", score, format));

    Table tiers{"Solves by tier", {"scaffold", "tier", "solved", "attempted"}, {}};
    for (const auto& r : rollups) {
        for (const auto& [tier, counts] : r.by_tier)
            tiers.rows.push_back({r.scaffold, tier, std::to_string(counts.first),
                                  std::to_string(counts.second)});
    }
    docs.push_back(render("tiers", tiers, format));

    std::vector<std::string> order = scaffold_order;
    if (order.empty())
        for (const auto& r : rollups) order.push_back(r.scaffold);
    const auto activity = activity_report(records, board_files, order);
    Table act{"Board activity",
              {"scaffold", "reads", "lines_read", "writes", "posts", "wins"},
              {}};
    auto act_row = [](const ActivityRow& r) {
        return std::vector<std::string>{r.scaffold,
                                        std::to_string(r.reads),
                                        std::to_string(r.lines_read),
                                        std::to_string(r.writes),
                                        std::to_string(r.posts),
                                        std::to_string(r.wins)};
    };
    for (const auto& row : activity.rows) act.rows.push_back(act_row(row));
    if (!activity.rows.empty()) act.rows.push_back(act_row(activity.total));
    docs.push_back(render("activity", act, format));

    Table tokens{"Token profiles",
                 {"scaffold", "session", "requests", "total_input", "total_output",
                  "peak_input", "monotone_context"},
                 {}};
    for (const auto& profile : token_profiles(ledger)) {
        tokens.rows.push_back({profile.scaffold, profile.session,
                               std::to_string(profile.points.size()),
                               std::to_string(profile.total_input),
                               std::to_string(profile.total_output),
                               std::to_string(profile.peak_input),
                               monotone_context(profile) ? "yes" : "no"});
    }
    docs.push_back(render("token_profiles", tokens, format));
    return docs;
}

} // namespace csi::analytics
