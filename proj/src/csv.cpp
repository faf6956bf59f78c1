#include "qrisk/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qrisk/errors.hpp"

namespace qrisk {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string strip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
}

double parse_cell(const std::string& raw, const std::string& origin, std::size_t row,
                  std::size_t col) {
    const std::string text = strip(raw);
    if (text.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError(origin + ": unparseable cell at row " + std::to_string(row + 1) +
                         ", column " + std::to_string(col + 1) + ": '" + text + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

PriceTable parse_price_csv(const std::string& text, const std::string& origin) {
    std::stringstream stream(text);
    std::string line;
    if (!std::getline(stream, line)) throw SchemaError(origin + ": empty file");
    const std::vector<std::string> header = split_line(strip(line));
    if (header.size() < 2 || strip(header[0]) != "date")
        throw SchemaError(origin + ": header must be 'date,<asset>,...'");

    PriceTable table;
    for (std::size_t i = 1; i < header.size(); ++i) {
        const std::string name = strip(header[i]);
        if (name.empty()) throw SchemaError(origin + ": empty column name in header");
        if (std::find(table.columns.begin(), table.columns.end(), name) != table.columns.end())
            throw SchemaError(origin + ": duplicate column '" + name + "'");
        table.columns.push_back(name);
    }

    std::vector<std::vector<double>> rows;
    std::size_t row_no = 1;
    while (std::getline(stream, line)) {
        const std::string clean = strip(line);
        if (clean.empty()) {
            ++row_no;
            continue;
        }
        const std::vector<std::string> cells = split_line(clean);
        if (cells.size() != header.size())
            throw SchemaError(origin + ": row " + std::to_string(row_no + 1) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(header.size()));
        Date date;
        try {
            date = Date::parse(strip(cells[0]));
        } catch (const ParseError& e) {
            throw ParseError(origin + ": row " + std::to_string(row_no + 1) + ": " + e.what());
        }
        if (!table.dates.empty() && !(table.dates.back() < date))
            throw SchemaError(origin + ": dates not strictly increasing at row " +
                              std::to_string(row_no + 1));
        table.dates.push_back(date);
        std::vector<double> row(table.columns.size());
        for (std::size_t c = 1; c < cells.size(); ++c)
            row[c - 1] = parse_cell(cells[c], origin, row_no, c);
        rows.push_back(std::move(row));
        ++row_no;
    }
    if (rows.empty()) throw SchemaError(origin + ": no data rows");

    table.values.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(table.columns.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return table;
}

PriceTable read_price_csv(const std::string& path) { return parse_price_csv(read_file(path), path); }

PriceSeries column_series(const PriceTable& table, const std::string& name) {
    const auto it = std::find(table.columns.begin(), table.columns.end(), name);
    if (it == table.columns.end()) throw SchemaError("no such column: '" + name + "'");
    const auto col = static_cast<Eigen::Index>(it - table.columns.begin());

    std::vector<Date> dates;
    std::vector<double> values;
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
        const double v = table.values(r, col);
        if (std::isnan(v)) continue;
        dates.push_back(table.dates[static_cast<std::size_t>(r)]);
        values.push_back(v);
    }
    return PriceSeries::make(std::move(dates), std::move(values));
}

IngestResult ingest(const PriceTable& table, const std::vector<std::string>& columns) {
    if (columns.empty()) throw SchemaError("ingest: no columns requested");
    std::vector<Eigen::Index> col_idx;
    for (const auto& name : columns) {
        const auto it = std::find(table.columns.begin(), table.columns.end(), name);
        if (it == table.columns.end()) throw SchemaError("ingest: no such column: '" + name + "'");
        col_idx.push_back(static_cast<Eigen::Index>(it - table.columns.begin()));
    }

    // Alignment: keep only dates present in every requested series.
    std::vector<Eigen::Index> kept;
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
        bool complete = true;
        for (Eigen::Index c : col_idx)
            if (std::isnan(table.values(r, c))) {
                complete = false;
                break;
            }
        if (complete) kept.push_back(r);
    }
    if (kept.size() < 2) throw InsufficientData("ingest: fewer than 2 complete rows");

    IngestResult out;
    out.dropped_rows = static_cast<int>(table.rows() - static_cast<Eigen::Index>(kept.size()));
    out.panel.assets = columns;
    out.panel.kind = PanelKind::log_return;
    const auto n_ret = static_cast<Eigen::Index>(kept.size()) - 1;
    out.panel.matrix.resize(n_ret, static_cast<Eigen::Index>(col_idx.size()));
    out.panel.dates.resize(static_cast<std::size_t>(n_ret));
    for (Eigen::Index i = 0; i < n_ret; ++i) {
        const Eigen::Index prev = kept[static_cast<std::size_t>(i)];
        const Eigen::Index curr = kept[static_cast<std::size_t>(i) + 1];
        out.panel.dates[static_cast<std::size_t>(i)] = table.dates[static_cast<std::size_t>(curr)];
        for (std::size_t c = 0; c < col_idx.size(); ++c) {
            const double p_prev = table.values(prev, col_idx[c]);
            const double p_curr = table.values(curr, col_idx[c]);
            if (!(p_prev > 0.0) || !(p_curr > 0.0))
                throw DomainError("ingest: non-positive price in column '" + columns[c] + "' at " +
                                  table.dates[static_cast<std::size_t>(curr)].to_string());
            out.panel.matrix(i, static_cast<Eigen::Index>(c)) = std::log(p_curr / p_prev);
        }
    }
    return out;
}

IngestResult ingest_file(const std::string& path, const std::vector<std::string>& columns) {
    return ingest(read_price_csv(path), columns);
}

std::vector<std::pair<std::string, double>> read_weights_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::stringstream stream(text);
    std::string line;
    if (!std::getline(stream, line)) throw SchemaError(path + ": empty weights file");
    const std::vector<std::string> header = split_line(strip(line));
    if (header.size() != 2 || strip(header[0]) != "asset" || strip(header[1]) != "weight")
        throw SchemaError(path + ": header must be 'asset,weight'");

    std::vector<std::pair<std::string, double>> out;
    std::size_t row_no = 1;
    while (std::getline(stream, line)) {
        const std::string clean = strip(line);
        if (clean.empty()) {
            ++row_no;
            continue;
        }
        const std::vector<std::string> cells = split_line(clean);
        if (cells.size() != 2)
            throw SchemaError(path + ": row " + std::to_string(row_no + 1) + " needs 2 cells");
        out.emplace_back(strip(cells[0]), parse_cell(cells[1], path, row_no, 1));
        ++row_no;
    }
    if (out.empty()) throw SchemaError(path + ": no weights");
    return out;
}

void write_weights_csv(const std::string& path, const Portfolio& portfolio) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << "asset,weight\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < portfolio.size(); ++i)
        out << portfolio.assets[static_cast<std::size_t>(i)] << "," << portfolio.weights(i) << "\n";
}

}  // namespace qrisk
