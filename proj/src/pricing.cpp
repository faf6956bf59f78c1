#include "qrisk/pricing.hpp"

#include <cmath>

#include "qrisk/errors.hpp"
#include "qrisk/rng.hpp"

namespace qrisk {

int BinomialModel::steps() const {
    const double raw = static_cast<double>(n) * t;
    const double rounded = std::round(raw);
    if (std::fabs(raw - rounded) > 1e-9 || rounded < 1.0)
        throw InvalidInput("BinomialModel: n*t must be a positive integer");
    return static_cast<int>(rounded);
}

double risk_neutral_prob(const BinomialModel& model) {
    if (!(model.d > 0.0) || !(model.d < model.u))
        throw InvalidInput("risk_neutral_prob: need 0 < d < u");
    const double growth = 1.0 + model.r / static_cast<double>(model.n);
    if (!(model.d < growth && growth < model.u))
        throw ArbitrageError("risk_neutral_prob: 1 + r/n outside (d, u) admits arbitrage");
    return (growth - model.d) / (model.u - model.d);
}

LatticeDistribution lattice_distribution(const BinomialModel& model, int step) {
    const int total = model.steps();
    if (step < 0 || step > total) throw IndexError("lattice_distribution: step out of range");
    const double p_hat = risk_neutral_prob(model);

    LatticeDistribution dist;
    dist.prices.resize(static_cast<std::size_t>(step) + 1);
    dist.probabilities.resize(static_cast<std::size_t>(step) + 1);
    const double log_u = std::log(model.u);
    const double log_d = std::log(model.d);
    const double log_p = std::log(p_hat);
    const double log_q = std::log1p(-p_hat);
    for (int ups = 0; ups <= step; ++ups) {
        // log-space binomial mass keeps large step counts stable
        const double log_comb = std::lgamma(step + 1.0) - std::lgamma(ups + 1.0) -
                                std::lgamma(step - ups + 1.0);
        dist.prices[static_cast<std::size_t>(ups)] =
            model.p0 * std::exp(ups * log_u + (step - ups) * log_d);
        dist.probabilities[static_cast<std::size_t>(ups)] =
            std::exp(log_comb + ups * log_p + (step - ups) * log_q);
    }
    return dist;
}

LatticeDistribution binomial_lattice(const BinomialModel& model, std::uint64_t seed,
                                     std::int64_t paths) {
    const int total = model.steps();
    const double p_hat = risk_neutral_prob(model);
    LatticeDistribution dist = lattice_distribution(model, total);
    if (paths < 0) throw InvalidInput("binomial_lattice: paths must be >= 0");
    dist.simulated.resize(static_cast<std::size_t>(paths));
    parallel_for(static_cast<std::size_t>(paths), 1, [&](std::size_t i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        int ups = 0;
        for (int s = 0; s < total; ++s)
            if (rng.next_uniform() < p_hat) ++ups;
        dist.simulated[i] = model.p0 * std::pow(model.u, ups) * std::pow(model.d, total - ups);
    });
    return dist;
}

std::vector<double> simulate_gbm(const GbmParams& params, double t, std::int64_t paths,
                                 std::uint64_t seed) {
    if (paths < 1) throw InvalidInput("simulate_gbm: paths must be >= 1");
    if (!(params.p0 > 0.0)) throw DomainError("simulate_gbm: p0 must be positive");
    if (params.sigma < 0.0) throw DomainError("simulate_gbm: sigma must be >= 0");
    if (t < 0.0) throw DomainError("simulate_gbm: t must be >= 0");

    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * t;
    const double diffusion = params.sigma * std::sqrt(t);
    std::vector<double> terminal(static_cast<std::size_t>(paths));
    parallel_for(terminal.size(), 1, [&](std::size_t i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        terminal[i] = params.p0 * std::exp(drift + diffusion * rng.next_gaussian());
    });
    return terminal;
}

}  // namespace qrisk
