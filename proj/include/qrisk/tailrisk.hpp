#pragma once

#include <span>

namespace qrisk {

/// Empirical tail-risk measures of a return sample at level alpha.
/// Values are in return units: negative numbers are losses.
struct TailRiskReport {
    double alpha = 0.05;
    double var_alpha = 0.0;
    double es_alpha = 0.0;
    int n_tail = 0;  // observations at or below the VaR quantile
};

/// Empirical Value-at-Risk: the order statistic r_(ceil(alpha*n)) of the
/// sorted sample (lower order statistic, no interpolation).
double empirical_var(std::span<const double> returns, double alpha);

/// Expected Shortfall: mean of all returns at or below the VaR quantile.
double empirical_es(std::span<const double> returns, double alpha);

/// VaR and ES together with the tail count.
TailRiskReport tail_risk(std::span<const double> returns, double alpha);

}  // namespace qrisk
