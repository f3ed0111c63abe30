#include "holonorm/csv_grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "holonorm/error.hpp"

namespace holonorm {

namespace {

constexpr double kLatticeTolerance = 1e-9;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string line_tag(std::size_t line) { return "CSV line " + std::to_string(line) + ": "; }

struct Axis {
    double lo = 0.0;
    double step = 0.0;
    std::size_t steps = 0;
};

struct OffLattice {
    double coordinate;
};

/// Infers a uniform lattice from the distinct coordinate values of one column.
Axis infer_axis(std::vector<double> coords, const std::string& name) {
    std::sort(coords.begin(), coords.end());
    const double range = coords.back() - coords.front();
    const double tol = kLatticeTolerance * std::max(1.0, std::abs(range));
    std::vector<double> distinct;
    for (double c : coords) {
        if (distinct.empty() || c - distinct.back() > tol) distinct.push_back(c);
    }
    if (distinct.size() < 2) throw InputError("column " + name + " needs at least two distinct coordinates");
    Axis axis{distinct.front(), range / static_cast<double>(distinct.size() - 1), distinct.size() - 1};
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        const double expected = axis.lo + static_cast<double>(i) * axis.step;
        if (std::abs(distinct[i] - expected) > kLatticeTolerance * std::max(1.0, std::abs(range)))
            throw OffLattice{distinct[i]};
    }
    return axis;
}

}  // namespace

GridFunction read_grid_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split(line);
            break;
        }
    }
    if (header.empty()) throw InputError("CSV input is empty");
    if (header.back() != "u") throw InputError(line_tag(line_no) + "last header column must be 'u'");
    const bool parabolic = header.size() >= 2 && header[header.size() - 2] == "t";
    const std::size_t dim = header.size() - 1 - (parabolic ? 1 : 0);
    if (dim == 0) throw InputError(line_tag(line_no) + "header needs at least one spatial column x1");
    for (std::size_t a = 0; a < dim; ++a) {
        if (header[a] != "x" + std::to_string(a + 1))
            throw InputError(line_tag(line_no) + "expected column 'x" + std::to_string(a + 1) + "', found '" +
                             header[a] + "'");
    }

    const std::size_t cols = header.size();
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_lines;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        if (fields.size() != cols)
            throw InputError(line_tag(line_no) + "expected " + std::to_string(cols) + " fields, found " +
                             std::to_string(fields.size()));
        std::vector<double> row(cols);
        for (std::size_t c = 0; c < cols; ++c) {
            const std::string& f = fields[c];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[c]);
            if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(row[c]))
                throw InputError(line_tag(line_no) + "field '" + header[c] + "' is not a finite number: '" + f + "'");
        }
        rows.push_back(std::move(row));
        row_lines.push_back(line_no);
    }
    if (rows.empty()) throw InputError("CSV input has a header but no data rows");

    const std::size_t lattice_axes = dim + (parabolic ? 1 : 0);
    std::vector<Axis> axes(lattice_axes);
    for (std::size_t a = 0; a < lattice_axes; ++a) {
        std::vector<double> column(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][a];
        try {
            axes[a] = infer_axis(column, header[a]);
        } catch (const OffLattice& bad) {
            const auto it = std::find(column.begin(), column.end(), bad.coordinate);
            const std::size_t line_at = row_lines[static_cast<std::size_t>(it - column.begin())];
            throw InputError(line_tag(line_at) + "column " + header[a] + " is not uniformly spaced (" + header[a] +
                             " = " + std::to_string(bad.coordinate) + ")");
        }
    }

    Domain domain;
    Resolution res;
    for (std::size_t a = 0; a < dim; ++a) {
        domain.lower.push_back(axes[a].lo);
        domain.upper.push_back(axes[a].lo + axes[a].step * static_cast<double>(axes[a].steps));
        res.spatial_steps.push_back(axes[a].steps);
    }
    if (parabolic) {
        const Axis& t = axes[dim];
        if (std::abs(t.lo) > kLatticeTolerance * std::max(1.0, t.step * static_cast<double>(t.steps)))
            throw InputError("time column must start at t = 0");
        domain.T = t.step * static_cast<double>(t.steps);
        res.time_steps = t.steps;
    }

    std::size_t expected = res.time_steps + 1;
    for (auto s : res.spatial_steps) expected *= s + 1;

    GridFunction shape(domain, res, std::vector<double>(expected, 0.0));
    std::vector<double> values(expected, 0.0);
    std::vector<bool> seen(expected, false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        NodeIndex node;
        for (std::size_t a = 0; a < lattice_axes; ++a) {
            const double pos = (rows[r][a] - axes[a].lo) / axes[a].step;
            const double idx = std::round(pos);
            if (std::abs(pos - idx) > 1e-6)
                throw InputError(line_tag(row_lines[r]) + "coordinate " + header[a] + " is off the lattice");
            if (a < dim)
                node.space.push_back(static_cast<std::int64_t>(idx));
            else
                node.time = static_cast<std::int64_t>(idx);
        }
        const std::size_t f = shape.flat(node);
        if (seen[f]) throw InputError(line_tag(row_lines[r]) + "duplicate lattice node");
        seen[f] = true;
        values[f] = rows[r][cols - 1];
    }
    const auto hole = std::find(seen.begin(), seen.end(), false);
    if (hole != seen.end()) {
        const NodeIndex n = shape.node(static_cast<std::size_t>(hole - seen.begin()));
        std::string where;
        const auto x = shape.position(n);
        for (std::size_t a = 0; a < dim; ++a) where += header[a] + "=" + std::to_string(x[a]) + " ";
        if (parabolic) where += "t=" + std::to_string(shape.time(n)) + " ";
        throw InputError("CSV lattice is incomplete: " + std::to_string(rows.size()) + " rows for " +
                         std::to_string(expected) + " nodes, first missing node at " + where.substr(0, where.size() - 1));
    }
    return shape.with_values(std::move(values));
}

GridFunction read_grid_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open CSV file '" + path + "'");
    return read_grid_csv(in);
}

void write_grid_csv(std::ostream& out, const GridFunction& u) {
    auto num = [](double v) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    for (std::size_t a = 0; a < u.dim(); ++a) out << "x" << a + 1 << ",";
    if (u.is_parabolic()) out << "t,";
    out << "u\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
        const NodeIndex node = u.node(i);
        for (double x : u.position(node)) out << num(x) << ",";
        if (u.is_parabolic()) out << num(u.time(node)) << ",";
        out << num(u.values()[i]) << "\n";
    }
}

}  // namespace holonorm
