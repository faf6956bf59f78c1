#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qrisk/covariance.hpp"

namespace qrisk {

enum class WeightScheme { index_cap, equal, markowitz, custom };

/// A fully-invested portfolio: weights sum to one.
struct Portfolio {
    std::vector<std::string> assets;
    Eigen::VectorXd weights;
    WeightScheme scheme = WeightScheme::custom;

    Eigen::Index size() const { return weights.size(); }
    double max_weight() const { return weights.maxCoeff(); }
    bool long_only() const { return (weights.array() >= -1e-12).all(); }
};

/// Volatility decomposition of a portfolio. For Monte Carlo output the
/// entries are posterior means and prob_positive holds P(cctr_j > 0).
struct RiskDecomposition {
    double sigma_p = 0.0;          // portfolio volatility per period
    Eigen::VectorXd mctr;          // d sigma_P / d w
    Eigen::VectorXd cctr;          // w_j * mctr_j, sums to sigma_p
    Eigen::VectorXd prob_positive; // Monte Carlo only, else empty
    std::int64_t draws_used = 0;
};

/// Minimum-variance weights subject to full investment and a target mean
/// return. The two-constraint case is solved in closed form; long-only adds
/// an active-set loop that pins weights at zero and can release them until
/// the KKT conditions hold. Throws SingularCovariance and InfeasibleTarget.
Portfolio markowitz_optimize(const Eigen::VectorXd& mean, const CovarianceEstimate& cov,
                             double target_mu, bool long_only,
                             std::vector<std::string> assets = {});

/// Global minimum-variance portfolio Sigma^{-1} 1 / (1' Sigma^{-1} 1).
Portfolio global_minimum_variance(const CovarianceEstimate& cov,
                                  std::vector<std::string> assets = {});

/// sqrt(w' Sigma w).
double portfolio_volatility(const Portfolio& port, const CovarianceEstimate& cov);

/// Idiosyncratic risk w' Sigma_eps w and its diversification bound
/// sigma_max^2 * max(w). The bound holds for every long-only portfolio.
struct IdiosyncraticBound {
    double risk = 0.0;
    double bound = 0.0;
};
IdiosyncraticBound idiosyncratic_bound(const Portfolio& port, const CovarianceEstimate& idio);

/// The 1/P portfolio: the unique minimiser of the maximum weight.
Portfolio equal_weight(std::vector<std::string> assets);
Portfolio equal_weight(Eigen::Index p);

/// Analytic MCTR/CCTR decomposition for a fixed covariance.
/// mctr = Sigma w / sigma_P, cctr_j = w_j * mctr_j. Throws
/// DegeneratePortfolio when the portfolio variance is zero.
RiskDecomposition risk_decomposition(const Portfolio& port, const CovarianceEstimate& cov);

/// Bayesian Monte Carlo contribution-to-risk estimate: N posterior draws,
/// per-draw decomposition, posterior means and P(cctr_j > 0). Draw i is keyed
/// by (seed, i), so results are identical for any worker count.
RiskDecomposition bayes_mc_risk(const Portfolio& port, const InverseWishartPosterior& post,
                                std::int64_t n_draws, std::uint64_t seed, unsigned workers = 1);

/// Per-draw record of an Algorithm-1 run, for callers that need the full chain.
struct McRiskDraws {
    Eigen::VectorXd sigma_p;   // N
    Eigen::MatrixXd cctr;      // N x P
    RiskDecomposition summary;
};
McRiskDraws bayes_mc_risk_draws(const Portfolio& port, const InverseWishartPosterior& post,
                                std::int64_t n_draws, std::uint64_t seed, unsigned workers = 1);

}  // namespace qrisk
