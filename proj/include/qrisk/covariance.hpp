#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qrisk/timeseries.hpp"

namespace qrisk {

enum class CovProvenance { sample, posterior_mode, posterior_draw };

/// Symmetric P x P covariance matrix tagged with how it was produced.
struct CovarianceEstimate {
    Eigen::MatrixXd matrix;
    CovProvenance provenance = CovProvenance::sample;
    int rank = 0;

    Eigen::Index dim() const { return matrix.rows(); }
};

/// Conjugate inverse-Wishart posterior for a covariance matrix:
/// Sigma | S  ~  IW(n0 + n - 1, Psi + S).
struct InverseWishartPosterior {
    double df = 0.0;               // n0 + n - 1
    Eigen::MatrixXd scale;         // Psi + S
    double prior_df = 0.0;         // n0
    Eigen::MatrixXd prior_scale;   // Psi
    int n_obs = 0;                 // n

    Eigen::Index dim() const { return scale.rows(); }
};

/// Sample covariance with divisor n-1; numerical rank reported.
/// Throws InsufficientData for n < 2.
CovarianceEstimate sample_covariance(const ReturnPanel& panel);

/// Builds the conjugate posterior. Prior degrees of freedom
/// n0 = max(P - n, 0) + c; when prior_scale is empty the default
/// (average sample variance) * identity is used. Throws InvalidPrior if the
/// supplied prior scale is not positive definite.
InverseWishartPosterior build_posterior(const CovarianceEstimate& sample, int n,
                                        const Eigen::MatrixXd& prior_scale, double c);

/// Convenience overload using the default prior scale.
InverseWishartPosterior build_posterior(const CovarianceEstimate& sample, int n, double c);

/// Posterior-mode shrinkage estimator (Psi + S) / (n0 + n + P); always
/// positive definite. The equivalent weighted-average form is validated
/// internally to 1e-12.
CovarianceEstimate posterior_mode(const InverseWishartPosterior& post, int n);

/// One inverse-Wishart draw via the Bartlett construction; symmetric positive
/// definite by construction. Deterministic given (seed). Throws
/// ImproperPosterior when df <= P - 1.
CovarianceEstimate sample_posterior(const InverseWishartPosterior& post, std::uint64_t seed);

/// Draw with an explicit stream index, for parallel Monte Carlo loops keyed
/// by (seed, draw-index).
CovarianceEstimate sample_posterior_stream(const InverseWishartPosterior& post,
                                           std::uint64_t seed, std::uint64_t stream);

}  // namespace qrisk
