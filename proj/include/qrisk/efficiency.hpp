#pragma once

#include <map>
#include <span>
#include <string>

#include "qrisk/timeseries.hpp"

namespace qrisk {

/// Outcome of one hypothesis test.
struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int lags_used = 0;
    std::string null_hypothesis;
    std::map<double, bool> decision_at;  // significance level -> reject H0
    bool p_value_clamped = false;        // true when p hit a tabulated bound
};

/// Aggregate answer to the four market-efficiency questions.
enum class Verdict { efficient_consistent, not_efficient };

struct EfficiencyVerdict {
    bool prices_nonstationary = false;
    bool returns_stationary = false;
    bool returns_uncorrelated = false;
    bool returns_gaussian = false;
    Verdict verdict = Verdict::not_efficient;
};

/// Full battery output: the four step results plus the verdict.
struct EfficiencyBattery {
    TestResult prices_unit_root;     // ADF on log-prices
    TestResult returns_unit_root;    // ADF on log-returns
    TestResult returns_autocorr;     // Ljung-Box on log-returns
    TestResult returns_normality;    // normality on log-returns
    EfficiencyVerdict verdict;
};

/// Use this sentinel to request the automatic lag order floor((n-1)^(1/3)).
inline constexpr int kAutoLag = -1;

/// Augmented Dickey-Fuller unit-root test with constant and linear trend.
/// The statistic is the t-ratio on the lagged level; the p-value interpolates
/// the Dickey-Fuller trend-case table in both sample size and level and is
/// clamped to [0.01, 0.99]. Throws InsufficientData (n < 25) and
/// DegenerateInput (constant series).
TestResult adf_test(std::span<const double> series, int lag_order = kAutoLag);

/// Ljung-Box portmanteau test that the first H autocorrelations are zero.
/// Q = n(n+2) * sum_h rho_h^2/(n-h), chi-square with H degrees of freedom.
TestResult ljung_box(std::span<const double> series, int lags);

/// Normality test: Shapiro-Wilk (Royston's approximation) for 12 <= n <= 5000,
/// a skewness-kurtosis moment test beyond that (labelled in null_hypothesis).
TestResult normality_test(std::span<const double> series);

/// Runs the four-step battery on log-prices and log-returns of `prices`
/// and aggregates the verdict at the 5% level.
EfficiencyBattery efficiency_battery(const PriceSeries& prices, int lags);

}  // namespace qrisk
