#include "qrisk/efficiency.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "qrisk/errors.hpp"
#include "qrisk/linreg.hpp"
#include "qrisk/special.hpp"

namespace qrisk {

namespace {

constexpr std::array<double, 3> kDecisionLevels = {0.01, 0.05, 0.10};

void fill_decisions(TestResult& r) {
    for (double level : kDecisionLevels) r.decision_at[level] = r.p_value <= level;
}

// Dickey-Fuller percentiles for the regression with constant and trend
// (Table 4.2c in Banerjee et al. 1993), rows by sample size.
constexpr std::array<double, 6> kTableN = {25, 50, 100, 250, 500, 100000};
constexpr std::array<double, 8> kTableLevel = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr std::array<std::array<double, 6>, 8> kTableStat = {{
    {-4.38, -4.15, -4.04, -3.99, -3.98, -3.96},
    {-3.95, -3.80, -3.73, -3.69, -3.68, -3.66},
    {-3.60, -3.50, -3.45, -3.43, -3.42, -3.41},
    {-3.24, -3.18, -3.15, -3.13, -3.13, -3.12},
    {-1.14, -1.19, -1.22, -1.23, -1.24, -1.25},
    {-0.80, -0.87, -0.90, -0.92, -0.93, -0.94},
    {-0.50, -0.58, -0.62, -0.64, -0.65, -0.66},
    {-0.15, -0.24, -0.28, -0.31, -0.32, -0.33},
}};

// Piecewise-linear interpolation with flat extrapolation beyond the knots.
double interp_clamped(std::span<const double> xs, std::span<const double> ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    std::size_t hi = 1;
    while (xs[hi] < x) ++hi;
    const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
    return ys[hi - 1] + w * (ys[hi] - ys[hi - 1]);
}

// Interpolate the DF table at sample size n, then map the statistic to a
// p-value; clamps outside the tabulated [0.01, 0.99] range.
std::pair<double, bool> df_p_value(double stat, double n) {
    std::array<double, 8> stat_at_n{};
    for (std::size_t i = 0; i < 8; ++i)
        stat_at_n[i] = interp_clamped(kTableN, kTableStat[i], n);
    const bool clamped = stat <= stat_at_n.front() || stat >= stat_at_n.back();
    return {interp_clamped(stat_at_n, kTableLevel, stat), clamped};
}

std::vector<double> autocorrelations(std::span<const double> x, int max_lag) {
    const std::size_t n = x.size();
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (denom <= 0.0) throw DegenerateInput("autocorrelation: zero-variance series");
    std::vector<double> rho(static_cast<std::size_t>(max_lag));
    for (int h = 1; h <= max_lag; ++h) {
        double num = 0.0;
        for (std::size_t t = static_cast<std::size_t>(h); t < n; ++t)
            num += (x[t] - mean) * (x[t - static_cast<std::size_t>(h)] - mean);
        rho[static_cast<std::size_t>(h - 1)] = num / denom;
    }
    return rho;
}

double royston_poly(std::span<const double> c, double x) {
    double p = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) p = p * x + c[i];
    return p;
}

// Shapiro-Wilk W and p-value, Royston's AS R94 approximation, n >= 12.
TestResult shapiro_wilk(std::span<const double> series) {
    static constexpr std::array<double, 6> c1 = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
    static constexpr std::array<double, 6> c2 = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    static constexpr std::array<double, 4> c5 = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr std::array<double, 3> c6 = {-0.4803, -0.082676, 0.0030302};

    const std::size_t n = series.size();
    std::vector<double> x(series.begin(), series.end());
    std::sort(x.begin(), x.end());
    if (x.back() - x.front() <= 0.0) throw DegenerateInput("normality_test: constant series");

    const double dn = static_cast<double>(n);
    std::vector<double> m(n);
    double ssq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = special::norm_inv((static_cast<double>(i + 1) - 0.375) / (dn + 0.25));
        ssq += m[i] * m[i];
    }
    const double rsn = 1.0 / std::sqrt(dn);
    const double an = royston_poly(c1, rsn) + m[n - 1] / std::sqrt(ssq);
    const double an1 = royston_poly(c2, rsn) + m[n - 2] / std::sqrt(ssq);
    const double phi = (ssq - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
                       (1.0 - 2.0 * an * an - 2.0 * an1 * an1);

    std::vector<double> a(n);
    for (std::size_t i = 2; i + 2 < n; ++i) a[i] = m[i] / std::sqrt(phi);
    a[n - 1] = an;
    a[n - 2] = an1;
    a[0] = -an;
    a[1] = -an1;

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / dn;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += a[i] * x[i];
        den += (x[i] - mean) * (x[i] - mean);
    }
    const double w = num * num / den;

    const double log_n = std::log(dn);
    const double mu = royston_poly(c5, log_n);
    const double sigma = std::exp(royston_poly(c6, log_n));
    const double z = (std::log(1.0 - w) - mu) / sigma;

    TestResult r;
    r.statistic = w;
    r.p_value = special::norm_upper(z);
    r.null_hypothesis = "returns are Gaussian (Shapiro-Wilk)";
    fill_decisions(r);
    return r;
}

// Jarque-Bera fallback for n > 5000 where the Shapiro-Wilk coefficients
// are not validated.
TestResult moment_normality(std::span<const double> series) {
    const double n = static_cast<double>(series.size());
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : series) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 <= 0.0) throw DegenerateInput("normality_test: constant series");
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    const double jb = n / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));

    TestResult r;
    r.statistic = jb;
    r.p_value = special::chi_square_upper(jb, 2.0);
    r.null_hypothesis = "returns are Gaussian (skewness-kurtosis moment test)";
    fill_decisions(r);
    return r;
}

}  // namespace

TestResult adf_test(std::span<const double> series, int lag_order) {
    const std::size_t len = series.size();
    if (len < 25) throw InsufficientData("adf_test: need at least 25 observations");
    const double first = series.front();
    if (std::all_of(series.begin(), series.end(), [&](double v) { return v == first; }))
        throw DegenerateInput("adf_test: constant series");

    const int k = lag_order == kAutoLag
                      ? static_cast<int>(std::floor(std::cbrt(static_cast<double>(len - 1))))
                      : lag_order;
    if (k < 0) throw InvalidInput("adf_test: lag order must be >= 0");

    // Regression: diff(x)_t on (x_{t-1}, 1, t, diff(x)_{t-1..t-k}).
    const std::size_t n1 = len - 1;
    if (n1 <= static_cast<std::size_t>(k) + 3)
        throw InsufficientData("adf_test: series too short for requested lag order");
    std::vector<double> diff(n1);
    for (std::size_t i = 0; i < n1; ++i) diff[i] = series[i + 1] - series[i];

    const std::size_t rows = n1 - static_cast<std::size_t>(k);
    const Eigen::Index p = 3 + k;
    Eigen::MatrixXd design(rows, p);
    Eigen::VectorXd response(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t u = r + static_cast<std::size_t>(k);
        response(static_cast<Eigen::Index>(r)) = diff[u];
        design(static_cast<Eigen::Index>(r), 0) = series[u];                       // lagged level
        design(static_cast<Eigen::Index>(r), 1) = 1.0;                             // constant
        design(static_cast<Eigen::Index>(r), 2) = static_cast<double>(u + 1);      // trend
        for (int j = 1; j <= k; ++j)
            design(static_cast<Eigen::Index>(r), 2 + j) = diff[u - static_cast<std::size_t>(j)];
    }

    const OlsResult fit = ols(design, response);

    TestResult r;
    r.statistic = fit.coef(0) / fit.std_error(0);
    r.lags_used = k;
    r.null_hypothesis = "series has a unit root (random walk)";
    auto [p_value, clamped] = df_p_value(r.statistic, static_cast<double>(n1));
    r.p_value = p_value;
    r.p_value_clamped = clamped;
    fill_decisions(r);
    return r;
}

TestResult ljung_box(std::span<const double> series, int lags) {
    const std::size_t n = series.size();
    if (lags < 1) throw InvalidInput("ljung_box: lags must be >= 1");
    if (n <= static_cast<std::size_t>(lags))
        throw InsufficientData("ljung_box: need more observations than lags");

    const std::vector<double> rho = autocorrelations(series, lags);
    const double dn = static_cast<double>(n);
    double q = 0.0;
    for (int h = 1; h <= lags; ++h)
        q += rho[static_cast<std::size_t>(h - 1)] * rho[static_cast<std::size_t>(h - 1)] /
             (dn - static_cast<double>(h));
    q *= dn * (dn + 2.0);

    TestResult r;
    r.statistic = q;
    r.p_value = special::chi_square_upper(q, static_cast<double>(lags));
    r.lags_used = lags;
    r.null_hypothesis = "first H autocorrelations are zero";
    fill_decisions(r);
    return r;
}

TestResult normality_test(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 12) throw InsufficientData("normality_test: need at least 12 observations");
    return n <= 5000 ? shapiro_wilk(series) : moment_normality(series);
}

EfficiencyBattery efficiency_battery(const PriceSeries& prices, int lags) {
    std::vector<double> log_prices(prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i) log_prices[i] = std::log(prices.values[i]);
    const ReturnSeries returns = log_return(prices);

    EfficiencyBattery b;
    b.prices_unit_root = adf_test(log_prices);
    b.returns_unit_root = adf_test(returns.values);
    b.returns_autocorr = ljung_box(returns.values, lags);
    b.returns_normality = normality_test(returns.values);

    constexpr double level = 0.05;
    b.verdict.prices_nonstationary = b.prices_unit_root.p_value > level;
    b.verdict.returns_stationary = b.returns_unit_root.p_value <= level;
    b.verdict.returns_uncorrelated = b.returns_autocorr.p_value > level;
    b.verdict.returns_gaussian = b.returns_normality.p_value > level;
    b.verdict.verdict = (b.verdict.prices_nonstationary && b.verdict.returns_stationary &&
                         b.verdict.returns_uncorrelated)
                            ? Verdict::efficient_consistent
                            : Verdict::not_efficient;
    return b;
}

}  // namespace qrisk
