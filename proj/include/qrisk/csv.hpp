#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "qrisk/portfolio.hpp"
#include "qrisk/timeseries.hpp"

namespace qrisk {

/// Parsed price CSV: header `date,<asset1>,<asset2>,...`, ISO-8601 dates,
/// decimal prices, empty cells for missing quotes (stored as NaN).
struct PriceTable {
    std::vector<Date> dates;
    std::vector<std::string> columns;
    Eigen::MatrixXd values;  // rows x columns, NaN = missing

    Eigen::Index rows() const { return values.rows(); }
};

PriceTable read_price_csv(const std::string& path);
PriceTable parse_price_csv(const std::string& text, const std::string& origin = "<string>");

/// One column as a PriceSeries, dropping that column's missing rows.
PriceSeries column_series(const PriceTable& table, const std::string& name);

/// Aligned log-return panel over the requested columns. Rows with any
/// missing requested cell are dropped before differencing.
struct IngestResult {
    ReturnPanel panel;
    int dropped_rows = 0;
};

IngestResult ingest(const PriceTable& table, const std::vector<std::string>& columns);
IngestResult ingest_file(const std::string& path, const std::vector<std::string>& columns);

/// Weights CSV: header `asset,weight`.
std::vector<std::pair<std::string, double>> read_weights_csv(const std::string& path);
void write_weights_csv(const std::string& path, const Portfolio& portfolio);

}  // namespace qrisk
