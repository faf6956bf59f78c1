#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qrisk/capm.hpp"

namespace qrisk {

enum class BootstrapScheme { plain, residual, paired };

/// Bootstrap run configuration. Replicate b draws from the stream keyed by
/// (seed, b), so results do not depend on the worker count.
struct BootstrapSpec {
    std::int64_t replications = 1000;
    std::uint64_t seed = 0;
    BootstrapScheme scheme = BootstrapScheme::plain;
    double ci_level = 0.95;
    bool keep_replicates = false;
    unsigned workers = 1;
};

/// Per-statistic bootstrap summary. Both interval forms are reported:
/// percentile endpoints are order statistics of the replicates, the normal
/// interval is estimate + z * SE.
struct StatisticSummary {
    std::string name;
    double estimate = 0.0;  // statistic on the original sample
    double mean = 0.0;      // mean of replicates
    double std_error = 0.0; // sqrt of replicate variance, divisor B
    double percentile_lo = 0.0;
    double percentile_hi = 0.0;
    double normal_lo = 0.0;
    double normal_hi = 0.0;
};

struct BootstrapSummary {
    std::vector<StatisticSummary> statistics;
    Eigen::MatrixXd replicates;  // B x n_statistics when kept, else empty
    std::int64_t redraws = 0;    // paired scheme: rank-deficient resamples redrawn
};

/// Plain SRSWR bootstrap of a scalar statistic.
BootstrapSummary bootstrap_statistic(std::span<const double> sample,
                                     const std::function<double(std::span<const double>)>& statistic,
                                     const BootstrapSpec& spec);

/// Residual bootstrap for the factor model: resample residual rows, rebuild
/// responses around the fitted values, refit on the fixed design.
BootstrapSummary residual_bootstrap_capm(const FactorDesign& design, const ReturnPanel& panel,
                                         const BootstrapSpec& spec);

/// Paired bootstrap: resample (response, design) rows jointly and refit.
/// Rank-deficient resamples are redrawn; more than 10% redraws raises
/// DegenerateResampling.
BootstrapSummary paired_bootstrap_capm(const FactorDesign& design, const ReturnPanel& panel,
                                       const BootstrapSpec& spec);

}  // namespace qrisk
