#pragma once

#include <cstdint>
#include <vector>

namespace qrisk {

/// Multiplicative binomial price model with n steps per unit time over
/// horizon t (n*t must be an integral number of steps).
struct BinomialModel {
    double p0 = 100.0;  // initial price
    double u = 1.1;     // up factor
    double d = 0.9;     // down factor, 0 < d < u
    double r = 0.0;     // annual rate; per-step rate is r/n
    int n = 1;          // steps per unit time
    double t = 1.0;     // horizon in time units

    int steps() const;  // n*t, validated integral
};

/// Exact terminal distribution of the lattice plus optional simulated paths.
struct LatticeDistribution {
    std::vector<double> prices;         // terminal support, ascending
    std::vector<double> probabilities;  // binomial masses under p_hat
    std::vector<double> simulated;      // terminal prices of simulated paths
};

/// Risk-neutral up-move probability ((1+r/n)-d)/(u-d). Throws ArbitrageError
/// unless d < 1+r/n < u.
double risk_neutral_prob(const BinomialModel& model);

/// Exact lattice distribution after `step` steps under the risk-neutral
/// measure (no simulation).
LatticeDistribution lattice_distribution(const BinomialModel& model, int step);

/// Terminal lattice distribution plus `paths` simulated price paths keyed by
/// (seed, path-index).
LatticeDistribution binomial_lattice(const BinomialModel& model, std::uint64_t seed,
                                     std::int64_t paths);

enum class Measure { real_world, risk_neutral };

/// Geometric Brownian motion parameters. Under the risk-neutral measure the
/// drift is the risk-free rate.
struct GbmParams {
    double p0 = 100.0;
    double mu = 0.0;     // drift per unit time (the risk-free rate when risk-neutral)
    double sigma = 0.0;  // volatility per unit time, >= 0
    Measure measure = Measure::real_world;
};

/// Exact-in-distribution terminal GBM samples: one lognormal draw per path,
/// no time discretisation. Path i is keyed by (seed, i).
std::vector<double> simulate_gbm(const GbmParams& params, double t, std::int64_t paths,
                                 std::uint64_t seed);

}  // namespace qrisk
