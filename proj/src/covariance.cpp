#include "qrisk/covariance.hpp"

#include <cmath>

#include "qrisk/errors.hpp"
#include "qrisk/rng.hpp"

namespace qrisk {

namespace {

int numerical_rank(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double tol = std::max(ev.cwiseAbs().maxCoeff(), 0.0) * sym.rows() * 1e-14;
    return static_cast<int>((ev.array() > tol).count());
}

// Prior degrees of freedom: (P - n) + c when n < P, floored at c otherwise
// so the posterior stays proper and shrinkage fades as n grows.
double prior_df_rule(Eigen::Index p, int n, double c) {
    return std::max(static_cast<double>(p) - static_cast<double>(n), 0.0) + c;
}

}  // namespace

CovarianceEstimate sample_covariance(const ReturnPanel& panel) {
    const Eigen::Index n = panel.rows();
    const Eigen::Index p = panel.cols();
    if (n < 2) throw InsufficientData("sample_covariance: need at least 2 rows");

    const Eigen::RowVectorXd means = panel.matrix.colwise().mean();
    const Eigen::MatrixXd centered = panel.matrix.rowwise() - means;
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
    cov = 0.5 * (cov + cov.transpose()).eval();

    CovarianceEstimate est;
    est.matrix = std::move(cov);
    est.provenance = CovProvenance::sample;
    est.rank = numerical_rank(est.matrix);
    (void)p;
    return est;
}

InverseWishartPosterior build_posterior(const CovarianceEstimate& sample, int n,
                                        const Eigen::MatrixXd& prior_scale, double c) {
    const Eigen::Index p = sample.dim();
    if (c <= 0.0) throw InvalidPrior("build_posterior: c must be > 0");
    if (n < 2) throw InsufficientData("build_posterior: need n >= 2");
    if (prior_scale.rows() != p || prior_scale.cols() != p)
        throw ShapeError("build_posterior: prior scale dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(prior_scale);
    if (llt.info() != Eigen::Success)
        throw InvalidPrior("build_posterior: prior scale is not positive definite");

    InverseWishartPosterior post;
    post.prior_df = prior_df_rule(p, n, c);
    post.df = post.prior_df + static_cast<double>(n) - 1.0;
    post.prior_scale = prior_scale;
    post.scale = prior_scale + sample.matrix;
    post.n_obs = n;
    return post;
}

InverseWishartPosterior build_posterior(const CovarianceEstimate& sample, int n, double c) {
    const Eigen::Index p = sample.dim();
    const double tau = sample.matrix.diagonal().mean();
    if (!(tau > 0.0))
        throw InvalidPrior("build_posterior: sample has zero average variance; supply a prior scale");
    return build_posterior(sample, n, tau * Eigen::MatrixXd::Identity(p, p), c);
}

CovarianceEstimate posterior_mode(const InverseWishartPosterior& post, int n) {
    const Eigen::Index p = post.dim();
    const double n0 = post.prior_df;
    const double denom = n0 + static_cast<double>(n) + static_cast<double>(p);

    CovarianceEstimate mode;
    mode.matrix = post.scale / denom;

    // Cross-check against the weighted-average form
    // q * Psi/(n0+P+1) + (1-q) * S/(n-1), q = (n0+P+1)/(n0+n+P).
    const double q = (n0 + static_cast<double>(p) + 1.0) / denom;
    const Eigen::MatrixXd sample_part = post.scale - post.prior_scale;
    const Eigen::MatrixXd weighted = q * post.prior_scale / (n0 + static_cast<double>(p) + 1.0) +
                                     (1.0 - q) * sample_part / (static_cast<double>(n) - 1.0);
    const double scale_ref = std::max(1.0, mode.matrix.cwiseAbs().maxCoeff());
    if ((weighted - mode.matrix).cwiseAbs().maxCoeff() > 1e-12 * scale_ref)
        throw NumericalFailure("posterior_mode: shrinkage identity violated");

    mode.provenance = CovProvenance::posterior_mode;
    mode.rank = static_cast<int>(p);
    return mode;
}

CovarianceEstimate sample_posterior_stream(const InverseWishartPosterior& post,
                                           std::uint64_t seed, std::uint64_t stream) {
    const Eigen::Index p = post.dim();
    if (!(post.df > static_cast<double>(p) - 1.0))
        throw ImproperPosterior("sample_posterior: df must exceed P - 1");

    Eigen::LLT<Eigen::MatrixXd> llt(post.scale);
    if (llt.info() != Eigen::Success)
        throw ImproperPosterior("sample_posterior: posterior scale is not positive definite");
    const Eigen::MatrixXd scale_l = llt.matrixL();

    // Bartlett factor of a Wishart(df, I) draw: lower triangular, chi on the
    // diagonal, standard normals below.
    CounterRng rng(seed, stream);
    Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        bartlett(i, i) = std::sqrt(rng.next_chi_square(post.df - static_cast<double>(i)));
        for (Eigen::Index j = 0; j < i; ++j) bartlett(i, j) = rng.next_gaussian();
    }

    // With W = C A A' C' ~ Wishart(df, Psi^{-1}) and C = L^{-T}, the inverse
    // draw is Sigma = (L A^{-T})(L A^{-T})', computed by triangular solves.
    const Eigen::MatrixXd m_t =
        bartlett.triangularView<Eigen::Lower>().solve(scale_l.transpose().eval());
    CovarianceEstimate draw;
    draw.matrix = m_t.transpose() * m_t;
    draw.matrix = 0.5 * (draw.matrix + draw.matrix.transpose()).eval();
    draw.provenance = CovProvenance::posterior_draw;
    draw.rank = static_cast<int>(p);
    return draw;
}

CovarianceEstimate sample_posterior(const InverseWishartPosterior& post, std::uint64_t seed) {
    return sample_posterior_stream(post, seed, 0);
}

}  // namespace qrisk
