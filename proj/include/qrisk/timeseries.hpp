#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qrisk/date.hpp"

namespace qrisk {

/// Dated sequence of positive prices for one asset.
/// Invariants: strictly increasing dates, every value > 0.
struct PriceSeries {
    std::vector<Date> dates;
    std::vector<double> values;

    /// Validating factory. Throws DomainError / ParseError on bad input.
    static PriceSeries make(std::vector<Date> dates, std::vector<double> values);

    std::size_t size() const { return values.size(); }
};

enum class ReturnKind { net, log };

/// Dated per-period returns. A return is dated at the later endpoint of its
/// holding period, so a ReturnSeries is one element shorter than its prices.
struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    ReturnKind kind = ReturnKind::log;

    std::size_t size() const { return values.size(); }
};

enum class PanelKind { log_return, risk_premium };

/// n x P matrix of log-returns or risk premia with date index and asset labels.
struct ReturnPanel {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    Eigen::MatrixXd matrix;  // rows: dates, cols: assets
    PanelKind kind = PanelKind::log_return;

    Eigen::Index rows() const { return matrix.rows(); }
    Eigen::Index cols() const { return matrix.cols(); }
};

/// Per-period net returns P_t/P_{t-1} - 1. Throws EmptyWindow for < 2 prices.
ReturnSeries net_return(const PriceSeries& series);

/// k-period gross return P_t/P_{t-k} over the last k periods of the series.
/// Throws IndexError when k < 1 or k >= series length.
double gross_return_k(const PriceSeries& series, int k);

/// Per-period log returns log(P_t) - log(P_{t-1}). Throws DomainError on
/// non-positive prices, EmptyWindow for < 2 prices.
ReturnSeries log_return(const PriceSeries& series);

/// Scales one-period volatility to a k-period horizon: sqrt(k) * sigma.
double horizon_volatility(double sigma_1, int k);

/// Future value of `value` at annual rate `rate` compounded m times a year
/// for `years` years.
double compound(double value, double rate, int m, double years);

}  // namespace qrisk
