#include "qrisk/capm.hpp"

#include "qrisk/errors.hpp"

namespace qrisk {

FactorDesign FactorDesign::single_factor(const Eigen::VectorXd& market_premium, std::string label,
                                         double risk_free_rate) {
    FactorDesign d;
    d.matrix.resize(market_premium.size(), 2);
    d.matrix.col(0).setOnes();
    d.matrix.col(1) = market_premium;
    d.factors = {std::move(label)};
    d.risk_free_rate = risk_free_rate;
    return d;
}

ReturnPanel risk_premium(const ReturnPanel& panel, double risk_free_annual, int periods_per_year) {
    if (panel.kind != PanelKind::log_return)
        throw InvalidInput("risk_premium: panel must hold log-returns");
    if (periods_per_year < 1) throw InvalidInput("risk_premium: periods_per_year must be >= 1");
    ReturnPanel out = panel;
    out.matrix.array() -= risk_free_annual / static_cast<double>(periods_per_year);
    out.kind = PanelKind::risk_premium;
    return out;
}

FactorFit fit_capm(const FactorDesign& design, const ReturnPanel& panel) {
    const Eigen::Index n = design.n();
    const Eigen::Index kp1 = design.matrix.cols();
    if (panel.rows() != n) throw ShapeError("fit_capm: design and panel row counts differ");
    if (n <= kp1) throw InsufficientData("fit_capm: need n > k+1 observations");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.matrix);
    qr.setThreshold(1e-10);
    if (qr.rank() < kp1) throw SingularDesign("fit_capm: design matrix is rank deficient");

    FactorFit fit;
    fit.assets = panel.assets;
    fit.coefficients = qr.solve(panel.matrix);
    fit.residuals = panel.matrix - design.matrix * fit.coefficients;

    const double df = static_cast<double>(n - kp1);
    fit.residual_var = fit.residuals.colwise().squaredNorm() / df;

    // Standard errors: sqrt(sigma_i^2 * diag((X'X)^{-1})).
    const Eigen::MatrixXd r_upper =
        qr.matrixR().topLeftCorner(kp1, kp1).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r_upper.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(kp1, kp1));
    Eigen::MatrixXd xtx_inv = r_inv * r_inv.transpose();
    xtx_inv = qr.colsPermutation() * xtx_inv * qr.colsPermutation().transpose();
    const Eigen::VectorXd xtx_diag = xtx_inv.diagonal();
    fit.std_errors.resize(kp1, panel.cols());
    for (Eigen::Index j = 0; j < panel.cols(); ++j)
        fit.std_errors.col(j) = (fit.residual_var(j) * xtx_diag.array()).sqrt();

    fit.r_squared.resize(panel.cols());
    for (Eigen::Index j = 0; j < panel.cols(); ++j) {
        const auto col = panel.matrix.col(j);
        const double tss = (col.array() - col.mean()).square().sum();
        fit.r_squared(j) = tss > 0.0 ? 1.0 - fit.residuals.col(j).squaredNorm() / tss : 0.0;
    }
    return fit;
}

CovarianceDecomposition decompose_covariance(const FactorFit& fit,
                                             const CovarianceEstimate& factor_cov) {
    const Eigen::Index k = fit.coefficients.rows() - 1;
    const Eigen::Index p = fit.coefficients.cols();
    if (factor_cov.dim() != k)
        throw ShapeError("decompose_covariance: factor covariance must be k x k");

    const Eigen::MatrixXd slopes = fit.coefficients.bottomRows(k);  // k x P
    CovarianceDecomposition d;
    d.systematic.matrix = slopes.transpose() * factor_cov.matrix * slopes;
    d.systematic.matrix = 0.5 * (d.systematic.matrix + d.systematic.matrix.transpose()).eval();
    d.systematic.provenance = CovProvenance::sample;
    d.systematic.rank = static_cast<int>(std::min(k, p));

    d.idiosyncratic.matrix = fit.residual_var.asDiagonal();
    d.idiosyncratic.provenance = CovProvenance::sample;
    d.idiosyncratic.rank = static_cast<int>((fit.residual_var.array() > 0.0).count());

    d.total.matrix = d.systematic.matrix + d.idiosyncratic.matrix;
    d.total.provenance = CovProvenance::sample;
    d.total.rank = static_cast<int>(p);
    return d;
}

}  // namespace qrisk
