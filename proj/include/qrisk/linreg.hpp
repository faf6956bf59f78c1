#pragma once

#include <Eigen/Dense>

namespace qrisk {

/// Ordinary least squares fit of y on the columns of X.
struct OlsResult {
    Eigen::VectorXd coef;
    Eigen::VectorXd std_error;   // homoskedastic formula, divisor n - k
    Eigen::VectorXd residuals;
    Eigen::VectorXd fitted;
    double sigma2 = 0.0;         // residual variance, divisor n - k
    int df_residual = 0;
    double r_squared = 0.0;      // centered R^2
};

/// Least-squares via rank-revealing QR. Throws SingularDesign when X is
/// rank-deficient, InsufficientData when n <= k.
OlsResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace qrisk
