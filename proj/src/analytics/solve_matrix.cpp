#include "csi/analytics/solve_matrix.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace csi::analytics {

std::uint32_t SolveMatrix::row_mask(size_t row) const {
    std::uint32_t mask = 0;
    for (size_t c = 0; c < cols(); ++c)
        if (cells[row][c]) mask |= (1u << c);
    return mask;
}

size_t SolveMatrix::union_count(std::uint32_t member_mask) const {
    size_t n = 0;
    for (size_t r = 0; r < rows(); ++r)
        if (row_mask(r) & member_mask) ++n;
    return n;
}

SolveMatrix SolveMatrix::from_csv(const std::string& text) {
    SolveMatrix m;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (header) {
            if (fields.size() < 2)
                throw std::runtime_error("solve matrix header needs at least one scaffold column");
            m.scaffolds.assign(fields.begin() + 1, fields.end());
            header = false;
            continue;
        }
        if (fields.size() != m.scaffolds.size() + 1)
            throw std::runtime_error("solve matrix line " + std::to_string(lineno) +
                                     ": expected " + std::to_string(m.scaffolds.size() + 1) + " fields");
        m.challenges.push_back(fields[0]);
        std::vector<bool> row;
        for (size_t i = 1; i < fields.size(); ++i) {
            if (fields[i] != "Y" && fields[i] != "N")
                throw std::runtime_error("solve matrix line " + std::to_string(lineno) +
                                         ": cell must be Y or N, got '" + fields[i] + "'");
            row.push_back(fields[i] == "Y");
        }
        m.cells.push_back(std::move(row));
    }
    if (m.scaffolds.empty()) throw std::runtime_error("empty solve matrix");
    return m;
}

SolveMatrix SolveMatrix::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read solve matrix " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv(buf.str());
}

std::string SolveMatrix::to_csv() const {
    std::string out = "challenge";
    for (const std::string& s : scaffolds) out += "," + s;
    out += "\n";
    for (size_t r = 0; r < rows(); ++r) {
        out += challenges[r];
        for (size_t c = 0; c < cols(); ++c) out += cells[r][c] ? ",Y" : ",N";
        out += "\n";
    }
    return out;
}

SolveMatrix SolveMatrix::from_records(const std::vector<orch::RunRecord>& records,
                                      const std::vector<std::string>& scaffold_order,
                                      const std::vector<std::string>& suite_order) {
    SolveMatrix m;
    m.scaffolds = scaffold_order;
    std::map<std::string, size_t> col;
    for (size_t c = 0; c < scaffold_order.size(); ++c) col[scaffold_order[c]] = c;

    std::vector<std::string> row_order = suite_order;
    if (row_order.empty()) {
        for (const auto& r : records)
            if (std::find(row_order.begin(), row_order.end(), r.challenge) == row_order.end())
                row_order.push_back(r.challenge);
    }
    std::map<std::string, size_t> rowix;
    for (size_t r = 0; r < row_order.size(); ++r) rowix[row_order[r]] = r;
    m.challenges = row_order;
    m.cells.assign(row_order.size(), std::vector<bool>(scaffold_order.size(), false));

    for (const auto& rec : records) {
        auto ri = rowix.find(rec.challenge);
        auto ci = col.find(rec.scaffold);
        if (ri == rowix.end() || ci == col.end()) continue;
        if (rec.solved) m.cells[ri->second][ci->second] = true;
    }
    return m;
}

} // namespace csi::analytics
