#include "arr2/cli/csv_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "arr2/cli/config.hpp"

namespace arr2::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& path, int lineno, const std::string& col, const std::string& cell) {
    if (cell.empty()) throw UserError(fmt::format("{}:{}: missing value in column '{}'", path, lineno, col));
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("trailing");
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        return v;
    } catch (const std::exception&) {
        throw UserError(fmt::format("{}:{}: column '{}' has non-numeric value '{}'", path, lineno, col, cell));
    }
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<int> lines;
};

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError(fmt::format("cannot open '{}'", path));
    Table t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#' || line == "\r") continue;
        const auto cells = split(line);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw UserError(fmt::format("{}:{}: expected {} columns, found {}", path, lineno, t.header.size(), cells.size()));
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_cell(path, lineno, t.header[c], cells[c]);
        t.rows.push_back(std::move(row));
        t.lines.push_back(lineno);
    }
    if (t.header.empty()) throw UserError(fmt::format("{}: no header row", path));
    return t;
}

std::ofstream open_out(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UserError(fmt::format("cannot write '{}'", path));
    return out;
}

void put_comments(std::ostream& out, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
}

}  // namespace

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

TimeSeriesData read_dataset(const std::string& path) {
    const Table t = read_table(path);
    if (t.header.size() < 2 || t.header[0] != "t" || t.header[1] != "y") {
        throw UserError(fmt::format("{}: header must start with 't,y'", path));
    }
    if (t.rows.empty()) throw UserError(fmt::format("{}: no data rows", path));
    const int n = static_cast<int>(t.rows.size());
    const int m = static_cast<int>(t.header.size()) - 2;
    std::vector<double> y(n);
    Eigen::MatrixXd x(n, m);
    for (int r = 0; r < n; ++r) {
        const double tv = t.rows[r][0];
        if (tv != std::floor(tv)) throw UserError(fmt::format("{}:{}: t must be an integer", path, t.lines[r]));
        if (r > 0 && tv != t.rows[r - 1][0] + 1.0) {
            throw UserError(fmt::format("{}:{}: t jumps from {} to {} (gap or disorder)", path, t.lines[r],
                                        t.rows[r - 1][0], tv));
        }
        y[r] = t.rows[r][1];
        for (int c = 0; c < m; ++c) x(r, c) = t.rows[r][c + 2];
    }
    TimeSeriesData d(std::move(y), std::move(x));
    d.x_names.assign(t.header.begin() + 2, t.header.end());
    return d;
}

void write_dataset(const std::string& path, const TimeSeriesData& data, const std::vector<std::string>& comments) {
    auto out = open_out(path);
    put_comments(out, comments);
    out << "t,y";
    for (const auto& n : data.x_names) out << ',' << n;
    out << '\n';
    for (int t = 0; t < data.T(); ++t) {
        out << (t + 1) << ',' << fmt_double(data.y[t]);
        for (int c = 0; c < data.m(); ++c) out << ',' << fmt_double(data.x(t, c));
        out << '\n';
    }
}

void write_draws(const std::string& path, const inference::DrawsMatrix& draws, const std::vector<std::string>& comments) {
    auto out = open_out(path);
    put_comments(out, comments);
    out << "chain,iteration";
    for (const auto& n : draws.names) out << ',' << n;
    out << '\n';
    for (int c = 0; c < draws.chains; ++c) {
        for (int i = 0; i < draws.per_chain; ++i) {
            const int r = c * draws.per_chain + i;
            out << (c + 1) << ',' << (i + 1);
            for (Eigen::Index k = 0; k < draws.values.cols(); ++k) out << ',' << fmt_double(draws.values(r, k));
            out << '\n';
        }
    }
}

inference::DrawsMatrix read_draws(const std::string& path) {
    const Table t = read_table(path);
    if (t.header.size() < 2 || t.header[0] != "chain" || t.header[1] != "iteration") {
        throw UserError(fmt::format("{}: header must start with 'chain,iteration'", path));
    }
    inference::DrawsMatrix d;
    d.names.assign(t.header.begin() + 2, t.header.end());
    const int n = static_cast<int>(t.rows.size());
    if (n == 0) throw UserError(fmt::format("{}: no draws", path));
    int chains = 0;
    for (int r = 0; r < n; ++r) {
        const int c = static_cast<int>(t.rows[r][0]);
        if (c != chains && c != chains + 1) {
            throw UserError(fmt::format("{}:{}: chains must be numbered 1, 2, ... in blocks", path, t.lines[r]));
        }
        chains = c;
    }
    if (chains < 1 || n % chains != 0) throw UserError(fmt::format("{}: chains have unequal lengths", path));
    d.chains = chains;
    d.per_chain = n / chains;
    d.values.resize(n, static_cast<Eigen::Index>(d.names.size()));
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(t.rows[r][0]) != r / d.per_chain + 1) {
            throw UserError(fmt::format("{}:{}: chains have unequal lengths", path, t.lines[r]));
        }
        for (std::size_t k = 0; k < d.names.size(); ++k) d.values(r, static_cast<Eigen::Index>(k)) = t.rows[r][k + 2];
    }
    return d;
}

void write_table(const std::string& path, const Row& header, const std::vector<Row>& rows,
                 const std::vector<std::string>& comments) {
    auto out = open_out(path);
    put_comments(out, comments);
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << r[k];
        out << '\n';
    }
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw UserError(fmt::format("failed writing '{}'", path));
}

}  // namespace arr2::cli
