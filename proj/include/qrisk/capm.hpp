#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qrisk/covariance.hpp"
#include "qrisk/timeseries.hpp"

namespace qrisk {

/// Regression design for a k-factor model: first column all ones, remaining
/// columns the factor risk premia.
struct FactorDesign {
    Eigen::MatrixXd matrix;            // n x (k+1)
    std::vector<std::string> factors;  // k labels (excluding the intercept)
    double risk_free_rate = 0.0;       // per period

    /// Single-market-factor design from a market risk-premium column.
    static FactorDesign single_factor(const Eigen::VectorXd& market_premium,
                                      std::string label = "market",
                                      double risk_free_rate = 0.0);

    Eigen::Index n() const { return matrix.rows(); }
    Eigen::Index k() const { return matrix.cols() - 1; }
};

/// Per-asset OLS estimates of the factor model, with residual diagnostics.
struct FactorFit {
    Eigen::MatrixXd coefficients;    // (k+1) x P, row 0 = alpha, rows 1.. = betas
    Eigen::MatrixXd std_errors;      // (k+1) x P
    Eigen::MatrixXd residuals;       // n x P
    Eigen::VectorXd residual_var;    // P, unbiased divisor n - (k+1)
    Eigen::VectorXd r_squared;       // P
    std::vector<std::string> assets;
};

/// Output of the covariance decomposition: model-implied systematic part,
/// diagonal idiosyncratic part, and their sum.
struct CovarianceDecomposition {
    CovarianceEstimate systematic;
    CovarianceEstimate idiosyncratic;
    CovarianceEstimate total;
};

/// Subtracts the per-period risk-free rate from every cell.
ReturnPanel risk_premium(const ReturnPanel& panel, double risk_free_annual, int periods_per_year);

/// Fits the factor model by least squares (QR, not an explicit inverse).
/// Throws SingularDesign on a rank-deficient design.
FactorFit fit_capm(const FactorDesign& design, const ReturnPanel& panel);

/// Splits the model-implied covariance into systematic (B' Sigma_X B over the
/// slope rows) and idiosyncratic (diag of residual variances) parts.
CovarianceDecomposition decompose_covariance(const FactorFit& fit,
                                             const CovarianceEstimate& factor_cov);

}  // namespace qrisk
