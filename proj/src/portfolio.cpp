#include "qrisk/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrisk/errors.hpp"
#include "qrisk/rng.hpp"

namespace qrisk {

namespace {

std::vector<std::string> default_labels(Eigen::Index p) {
    std::vector<std::string> labels(static_cast<std::size_t>(p));
    for (Eigen::Index i = 0; i < p; ++i)
        labels[static_cast<std::size_t>(i)] = "asset" + std::to_string(i + 1);
    return labels;
}

struct EqualitySolution {
    Eigen::VectorXd weights;   // over the free subset
    double lambda = 0.0;       // multiplier on the budget constraint
    double gamma = 0.0;        // multiplier on the target constraint
    bool degenerate = false;   // target constraint collinear with budget
};

// Solves min w'Sigma w on the free subset subject to 1'w = 1 and, when
// use_target, mu'w = target. Closed-form two-constraint Lagrangian.
EqualitySolution solve_equality(const Eigen::LLT<Eigen::MatrixXd>& llt,
                                const Eigen::VectorXd& mu, double target, bool use_target) {
    const Eigen::Index m = mu.size();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    const Eigen::VectorXd sinv_one = llt.solve(ones);
    const double a = ones.dot(sinv_one);

    EqualitySolution sol;
    if (!use_target) {
        sol.lambda = 2.0 / a;
        sol.weights = sinv_one / a;
        return sol;
    }

    const Eigen::VectorXd sinv_mu = llt.solve(mu);
    const double b = ones.dot(sinv_mu);
    const double c = mu.dot(sinv_mu);
    const double det = a * c - b * b;
    // det/(a*c) in [0,1] by Cauchy-Schwarz; ~0 means mu is collinear with 1.
    if (!(c > 0.0) || det <= 1e-13 * a * c) {
        sol.degenerate = true;
        sol.lambda = 2.0 / a;
        sol.weights = sinv_one / a;
        return sol;
    }
    const double half_lambda = (c - target * b) / det;
    const double half_gamma = (target * a - b) / det;
    sol.lambda = 2.0 * half_lambda;
    sol.gamma = 2.0 * half_gamma;
    sol.weights = half_lambda * sinv_one + half_gamma * sinv_mu;
    return sol;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd out(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(idx[i], idx[j]);
    return out;
}

Eigen::VectorXd subvector(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& idx) {
    Eigen::VectorXd out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
    return out;
}

}  // namespace

Portfolio equal_weight(std::vector<std::string> assets) {
    if (assets.empty()) throw InvalidInput("equal_weight: need at least one asset");
    Portfolio p;
    p.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(assets.size()),
                                          1.0 / static_cast<double>(assets.size()));
    p.assets = std::move(assets);
    p.scheme = WeightScheme::equal;
    return p;
}

Portfolio equal_weight(Eigen::Index p) { return equal_weight(default_labels(p)); }

Portfolio global_minimum_variance(const CovarianceEstimate& cov, std::vector<std::string> assets) {
    const Eigen::Index p = cov.dim();
    Eigen::LLT<Eigen::MatrixXd> llt(cov.matrix);
    if (llt.info() != Eigen::Success)
        throw SingularCovariance("global_minimum_variance: covariance not positive definite");
    const EqualitySolution sol =
        solve_equality(llt, Eigen::VectorXd::Zero(p), 0.0, /*use_target=*/false);
    Portfolio out;
    out.assets = assets.empty() ? default_labels(p) : std::move(assets);
    out.weights = sol.weights;
    out.scheme = WeightScheme::markowitz;
    return out;
}

Portfolio markowitz_optimize(const Eigen::VectorXd& mean, const CovarianceEstimate& cov,
                             double target_mu, bool long_only, std::vector<std::string> assets) {
    const Eigen::Index p = cov.dim();
    if (mean.size() != p) throw ShapeError("markowitz_optimize: mean/covariance size mismatch");
    if (p < 1) throw InvalidInput("markowitz_optimize: empty problem");

    Eigen::LLT<Eigen::MatrixXd> llt_full(cov.matrix);
    if (llt_full.info() != Eigen::Success)
        throw SingularCovariance("markowitz_optimize: covariance not positive definite");

    const double mu_lo = mean.minCoeff();
    const double mu_hi = mean.maxCoeff();
    const double mu_span = mu_hi - mu_lo;
    const double mu_scale = std::max({1e-12, std::fabs(mu_lo), std::fabs(mu_hi)});

    // All-means-equal: the target constraint carries no information; fall back
    // to the minimum-variance portfolio.
    const bool degenerate_target = mu_span <= 1e-12 * mu_scale;

    if (long_only && !degenerate_target && (target_mu < mu_lo - 1e-12 * mu_scale ||
                                            target_mu > mu_hi + 1e-12 * mu_scale)) {
        throw InfeasibleTarget("markowitz_optimize: target " + std::to_string(target_mu) +
                               " outside attainable range [" + std::to_string(mu_lo) + ", " +
                               std::to_string(mu_hi) + "]");
    }

    const bool use_target = !degenerate_target;

    Portfolio out;
    out.assets = assets.empty() ? default_labels(p) : std::move(assets);
    out.scheme = WeightScheme::markowitz;

    if (!long_only) {
        const EqualitySolution sol = solve_equality(llt_full, mean, target_mu, use_target);
        out.weights = sol.weights;
    } else {
        // Active-set loop: pin negative weights at zero, release pinned assets
        // whose multiplier goes negative, until the KKT conditions hold.
        std::vector<bool> pinned(static_cast<std::size_t>(p), false);
        const int max_iter = 4 * static_cast<int>(p) + 8;
        Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
        double lambda = 0.0;
        double gamma = 0.0;
        bool converged = false;
        constexpr double tol = 1e-11;

        for (int iter = 0; iter < max_iter; ++iter) {
            std::vector<Eigen::Index> free;
            for (Eigen::Index i = 0; i < p; ++i)
                if (!pinned[static_cast<std::size_t>(i)]) free.push_back(i);
            if (free.size() < 2 && use_target)
                throw InfeasibleTarget("markowitz_optimize: active-set reduced below two assets");
            if (free.empty())
                throw NumericalFailure("markowitz_optimize: all weights pinned");

            const Eigen::MatrixXd cov_f = submatrix(cov.matrix, free);
            const Eigen::VectorXd mu_f = subvector(mean, free);
            Eigen::LLT<Eigen::MatrixXd> llt_f(cov_f);
            if (llt_f.info() != Eigen::Success)
                throw SingularCovariance("markowitz_optimize: reduced covariance not PD");

            bool subset_target = use_target;
            if (use_target) {
                const double span_f = mu_f.maxCoeff() - mu_f.minCoeff();
                if (span_f <= 1e-12 * mu_scale) {
                    // Free assets share one mean; the target must match it.
                    if (std::fabs(mu_f(0) - target_mu) > 1e-9 * mu_scale) {
                        // Release the pinned asset that moves the mean toward the target.
                        Eigen::Index best = -1;
                        double best_gap = 0.0;
                        for (Eigen::Index i = 0; i < p; ++i) {
                            if (!pinned[static_cast<std::size_t>(i)]) continue;
                            const double gap = (target_mu > mu_f(0)) ? mean(i) - mu_f(0)
                                                                     : mu_f(0) - mean(i);
                            if (gap > best_gap) {
                                best_gap = gap;
                                best = i;
                            }
                        }
                        if (best < 0)
                            throw InfeasibleTarget(
                                "markowitz_optimize: target unreachable on the long-only set");
                        pinned[static_cast<std::size_t>(best)] = false;
                        continue;
                    }
                    subset_target = false;  // constraint satisfied automatically
                }
            }

            const EqualitySolution sol = solve_equality(llt_f, mu_f, target_mu, subset_target);
            w.setZero();
            for (std::size_t i = 0; i < free.size(); ++i)
                w(free[i]) = sol.weights(static_cast<Eigen::Index>(i));
            lambda = sol.lambda;
            gamma = subset_target ? sol.gamma : 0.0;

            // Primal step: pin the most negative free weight, if any.
            Eigen::Index worst = -1;
            double worst_w = -tol;
            for (Eigen::Index i : free) {
                if (w(i) < worst_w) {
                    worst_w = w(i);
                    worst = i;
                }
            }
            if (worst >= 0) {
                pinned[static_cast<std::size_t>(worst)] = true;
                continue;
            }

            // Dual step: release the pinned asset with the most negative multiplier.
            const Eigen::VectorXd grad = 2.0 * (cov.matrix * w);
            Eigen::Index release = -1;
            double worst_eta = -1e-9 * std::max(1.0, grad.cwiseAbs().maxCoeff());
            for (Eigen::Index i = 0; i < p; ++i) {
                if (!pinned[static_cast<std::size_t>(i)]) continue;
                const double eta = grad(i) - lambda - gamma * mean(i);
                if (eta < worst_eta) {
                    worst_eta = eta;
                    release = i;
                }
            }
            if (release >= 0) {
                pinned[static_cast<std::size_t>(release)] = false;
                continue;
            }
            converged = true;
            break;
        }
        if (!converged)
            throw NumericalFailure("markowitz_optimize: active-set loop failed to converge");
        out.weights = w.cwiseMax(0.0);
    }

    // Post: equality constraints hold to 1e-8.
    const double budget_err = std::fabs(out.weights.sum() - 1.0);
    if (budget_err > 1e-8)
        throw NumericalFailure("markowitz_optimize: budget constraint residual " +
                               std::to_string(budget_err));
    if (use_target) {
        const double target_err = std::fabs(mean.dot(out.weights) - target_mu);
        if (target_err > 1e-8 * std::max(1.0, std::fabs(target_mu)))
            throw NumericalFailure("markowitz_optimize: target constraint residual " +
                                   std::to_string(target_err));
    }
    return out;
}

double portfolio_volatility(const Portfolio& port, const CovarianceEstimate& cov) {
    if (port.size() != cov.dim())
        throw ShapeError("portfolio_volatility: weight/covariance size mismatch");
    const double variance = port.weights.dot(cov.matrix * port.weights);
    return std::sqrt(std::max(variance, 0.0));
}

IdiosyncraticBound idiosyncratic_bound(const Portfolio& port, const CovarianceEstimate& idio) {
    const Eigen::Index p = idio.dim();
    if (port.size() != p) throw ShapeError("idiosyncratic_bound: size mismatch");
    const Eigen::MatrixXd off = idio.matrix - Eigen::MatrixXd(idio.matrix.diagonal().asDiagonal());
    const double diag_scale = std::max(1.0, idio.matrix.diagonal().cwiseAbs().maxCoeff());
    if (off.cwiseAbs().maxCoeff() > 1e-12 * diag_scale)
        throw InvalidInput("idiosyncratic_bound: covariance must be diagonal");

    IdiosyncraticBound out;
    out.risk = (port.weights.array().square() * idio.matrix.diagonal().array()).sum();
    out.bound = idio.matrix.diagonal().maxCoeff() * port.max_weight();
    if (port.long_only() && out.risk > out.bound * (1.0 + 1e-10) + 1e-30)
        throw NumericalFailure("idiosyncratic_bound: diversification bound violated");
    return out;
}

RiskDecomposition risk_decomposition(const Portfolio& port, const CovarianceEstimate& cov) {
    if (port.size() != cov.dim()) throw ShapeError("risk_decomposition: size mismatch");
    const Eigen::VectorXd cov_w = cov.matrix * port.weights;
    const double variance = port.weights.dot(cov_w);
    if (!(variance > 0.0)) throw DegeneratePortfolio("risk_decomposition: zero portfolio variance");

    RiskDecomposition d;
    d.sigma_p = std::sqrt(variance);
    d.mctr = cov_w / d.sigma_p;
    d.cctr = port.weights.cwiseProduct(d.mctr);
    return d;
}

McRiskDraws bayes_mc_risk_draws(const Portfolio& port, const InverseWishartPosterior& post,
                                std::int64_t n_draws, std::uint64_t seed, unsigned workers) {
    const Eigen::Index p = post.dim();
    if (port.size() != p) throw ShapeError("bayes_mc_risk: portfolio/posterior size mismatch");
    if (n_draws < 1) throw InvalidSpec("bayes_mc_risk: need at least one draw");

    McRiskDraws out;
    out.sigma_p.resize(n_draws);
    out.cctr.resize(n_draws, p);
    Eigen::MatrixXd mctr(n_draws, p);

    parallel_for(static_cast<std::size_t>(n_draws), workers, [&](std::size_t i) {
        const CovarianceEstimate draw =
            sample_posterior_stream(post, seed, static_cast<std::uint64_t>(i));
        const Eigen::VectorXd cov_w = draw.matrix * port.weights;
        const double sigma = std::sqrt(std::max(port.weights.dot(cov_w), 0.0));
        const Eigen::Index row = static_cast<Eigen::Index>(i);
        out.sigma_p(row) = sigma;
        mctr.row(row) = (cov_w / sigma).transpose();
        out.cctr.row(row) = port.weights.cwiseProduct(cov_w / sigma).transpose();
    });

    RiskDecomposition& s = out.summary;
    s.draws_used = n_draws;
    s.sigma_p = out.sigma_p.mean();
    s.mctr = mctr.colwise().mean().transpose();
    s.cctr = out.cctr.colwise().mean().transpose();
    s.prob_positive.resize(p);
    for (Eigen::Index j = 0; j < p; ++j)
        s.prob_positive(j) =
            static_cast<double>((out.cctr.col(j).array() > 0.0).count()) /
            static_cast<double>(n_draws);
    return out;
}

RiskDecomposition bayes_mc_risk(const Portfolio& port, const InverseWishartPosterior& post,
                                std::int64_t n_draws, std::uint64_t seed, unsigned workers) {
    return bayes_mc_risk_draws(port, post, n_draws, seed, workers).summary;
}

}  // namespace qrisk
