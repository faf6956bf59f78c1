#include "qrisk/linreg.hpp"

#include "qrisk/errors.hpp"

namespace qrisk {

OlsResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();
    if (y.size() != n) throw ShapeError("ols: X and y row counts differ");
    if (n <= k) throw InsufficientData("ols: need more observations than regressors");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) throw SingularDesign("ols: design matrix is rank deficient");

    OlsResult out;
    out.coef = qr.solve(y);
    out.fitted = X * out.coef;
    out.residuals = y - out.fitted;
    out.df_residual = static_cast<int>(n - k);
    out.sigma2 = out.residuals.squaredNorm() / static_cast<double>(out.df_residual);

    // (X'X)^{-1} from the QR factors: X P = Q R  =>  (X'X)^{-1} = P R^{-1} R^{-T} P'.
    const Eigen::MatrixXd r_upper =
        qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r_upper.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd xtx_inv = r_inv * r_inv.transpose();
    xtx_inv = qr.colsPermutation() * xtx_inv * qr.colsPermutation().transpose();
    out.std_error = (out.sigma2 * xtx_inv.diagonal().array()).sqrt();

    const double tss = (y.array() - y.mean()).square().sum();
    out.r_squared = tss > 0.0 ? 1.0 - out.residuals.squaredNorm() / tss : 0.0;
    return out;
}

}  // namespace qrisk
