#include "qrisk/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "qrisk/errors.hpp"
#include "qrisk/rng.hpp"
#include "qrisk/special.hpp"

namespace qrisk {

namespace {

// Order statistic r_(ceil(q*B)), 1-based, matching the tail-risk convention.
double order_stat(const std::vector<double>& sorted, double q) {
    const std::size_t b = sorted.size();
    auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(b)));
    idx = std::clamp<std::size_t>(idx, 1, b);
    return sorted[idx - 1];
}

std::vector<std::string> coefficient_names(const FactorDesign& design,
                                           const std::vector<std::string>& assets) {
    std::vector<std::string> rows;
    rows.emplace_back("alpha");
    if (design.k() >= 1) rows.emplace_back("beta");
    for (Eigen::Index j = 1; j < design.k(); ++j) rows.emplace_back("b" + std::to_string(j));

    if (assets.size() <= 1) return rows;
    std::vector<std::string> out;
    for (const auto& asset : assets)
        for (const auto& row : rows) out.push_back(row + ":" + asset);
    return out;
}

BootstrapSummary summarize(std::vector<std::string> names, const Eigen::VectorXd& estimates,
                           Eigen::MatrixXd&& replicates, const BootstrapSpec& spec,
                           std::int64_t redraws) {
    const Eigen::Index b = replicates.rows();
    const Eigen::Index s = replicates.cols();
    const double alpha = 1.0 - spec.ci_level;
    const double z_lo = special::norm_inv(alpha / 2.0);
    const double z_hi = special::norm_inv(1.0 - alpha / 2.0);

    BootstrapSummary out;
    out.redraws = redraws;
    out.statistics.resize(static_cast<std::size_t>(s));
    for (Eigen::Index j = 0; j < s; ++j) {
        StatisticSummary& st = out.statistics[static_cast<std::size_t>(j)];
        st.name = names[static_cast<std::size_t>(j)];
        st.estimate = estimates(j);
        st.mean = replicates.col(j).mean();
        // Var(T_n)^B with divisor B
        st.std_error =
            std::sqrt((replicates.col(j).array() - st.mean).square().sum() / static_cast<double>(b));
        std::vector<double> sorted(replicates.col(j).data(), replicates.col(j).data() + b);
        std::sort(sorted.begin(), sorted.end());
        st.percentile_lo = order_stat(sorted, alpha / 2.0);
        st.percentile_hi = order_stat(sorted, 1.0 - alpha / 2.0);
        st.normal_lo = st.estimate + z_lo * st.std_error;
        st.normal_hi = st.estimate + z_hi * st.std_error;
    }
    if (spec.keep_replicates) out.replicates = std::move(replicates);
    return out;
}

void check_spec(const BootstrapSpec& spec) {
    if (spec.replications < 1) throw InvalidSpec("bootstrap: replications must be >= 1");
    if (!(spec.ci_level > 0.0 && spec.ci_level < 1.0))
        throw InvalidSpec("bootstrap: ci_level must lie in (0,1)");
}

}  // namespace

BootstrapSummary bootstrap_statistic(std::span<const double> sample,
                                     const std::function<double(std::span<const double>)>& statistic,
                                     const BootstrapSpec& spec) {
    check_spec(spec);
    if (sample.empty()) throw EmptyInput("bootstrap_statistic: empty sample");

    const std::size_t n = sample.size();
    const auto b = static_cast<Eigen::Index>(spec.replications);
    Eigen::MatrixXd replicates(b, 1);
    parallel_for(static_cast<std::size_t>(b), spec.workers, [&](std::size_t rep) {
        CounterRng rng(spec.seed, rep);
        std::vector<double> resample(n);
        for (std::size_t i = 0; i < n; ++i) resample[i] = sample[rng.next_index(n)];
        replicates(static_cast<Eigen::Index>(rep), 0) = statistic(resample);
    });

    Eigen::VectorXd estimate(1);
    estimate(0) = statistic(sample);
    return summarize({"statistic"}, estimate, std::move(replicates), spec, 0);
}

BootstrapSummary residual_bootstrap_capm(const FactorDesign& design, const ReturnPanel& panel,
                                         const BootstrapSpec& spec) {
    check_spec(spec);
    const FactorFit base = fit_capm(design, panel);
    const Eigen::MatrixXd fitted = design.matrix * base.coefficients;
    const Eigen::Index n = design.n();
    const Eigen::Index kp1 = design.matrix.cols();
    const Eigen::Index p = panel.cols();

    // The design is fixed across replicates; factor it once.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.matrix);

    const auto b = static_cast<Eigen::Index>(spec.replications);
    Eigen::MatrixXd replicates(b, kp1 * p);
    parallel_for(static_cast<std::size_t>(b), spec.workers, [&](std::size_t rep) {
        CounterRng rng(spec.seed, rep);
        Eigen::MatrixXd response(n, p);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto pick = static_cast<Eigen::Index>(rng.next_index(static_cast<std::uint64_t>(n)));
            response.row(i) = fitted.row(i) + base.residuals.row(pick);
        }
        const Eigen::MatrixXd coef = qr.solve(response);
        replicates.row(static_cast<Eigen::Index>(rep)) =
            Eigen::Map<const Eigen::RowVectorXd>(coef.data(), kp1 * p);
    });

    const Eigen::VectorXd estimates =
        Eigen::Map<const Eigen::VectorXd>(base.coefficients.data(), kp1 * p);
    return summarize(coefficient_names(design, panel.assets), estimates, std::move(replicates),
                     spec, 0);
}

BootstrapSummary paired_bootstrap_capm(const FactorDesign& design, const ReturnPanel& panel,
                                       const BootstrapSpec& spec) {
    check_spec(spec);
    const FactorFit base = fit_capm(design, panel);
    const Eigen::Index n = design.n();
    const Eigen::Index kp1 = design.matrix.cols();
    const Eigen::Index p = panel.cols();
    if (n < kp1 + 1) throw InsufficientData("paired_bootstrap_capm: need n >= k+2");

    const auto b = static_cast<Eigen::Index>(spec.replications);
    Eigen::MatrixXd replicates(b, kp1 * p);
    std::vector<std::int64_t> redraw_count(static_cast<std::size_t>(b), 0);

    parallel_for(static_cast<std::size_t>(b), spec.workers, [&](std::size_t rep) {
        CounterRng rng(spec.seed, rep);
        Eigen::MatrixXd design_star(n, kp1);
        Eigen::MatrixXd response_star(n, p);
        for (int attempt = 0;; ++attempt) {
            if (attempt > 1000)
                throw DegenerateResampling("paired_bootstrap_capm: replicate never full rank");
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto pick =
                    static_cast<Eigen::Index>(rng.next_index(static_cast<std::uint64_t>(n)));
                design_star.row(i) = design.matrix.row(pick);
                response_star.row(i) = panel.matrix.row(pick);
            }
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design_star);
            qr.setThreshold(1e-10);
            if (qr.rank() < kp1) {
                ++redraw_count[rep];
                continue;
            }
            const Eigen::MatrixXd coef = qr.solve(response_star);
            replicates.row(static_cast<Eigen::Index>(rep)) =
                Eigen::Map<const Eigen::RowVectorXd>(coef.data(), kp1 * p);
            break;
        }
    });

    std::int64_t redraws = 0;
    for (std::int64_t c : redraw_count) redraws += c;
    if (redraws > spec.replications / 10)
        throw DegenerateResampling("paired_bootstrap_capm: more than 10% of resamples redrawn");

    const Eigen::VectorXd estimates =
        Eigen::Map<const Eigen::VectorXd>(base.coefficients.data(), kp1 * p);
    return summarize(coefficient_names(design, panel.assets), estimates, std::move(replicates),
                     spec, redraws);
}

}  // namespace qrisk
