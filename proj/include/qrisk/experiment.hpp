#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qrisk/csv.hpp"
#include "qrisk/date.hpp"
#include "qrisk/portfolio.hpp"

namespace qrisk {

enum class CovMode { sample, bayes };

/// Resolved configuration for the before/during-event comparison run.
/// Loadable from a flat key=value file; every key can be overridden on the
/// command line.
struct ExperimentConfig {
    std::string price_file;
    std::string market_column;         // optional, reported only
    std::vector<std::string> assets;   // portfolio constituents
    std::string index_weights_file;    // cap weights, CSV asset,weight
    Date event_date;
    double risk_free_annual = 0.0;
    int periods_per_year = 252;
    std::vector<double> var_levels{0.05};
    CovMode cov_mode = CovMode::bayes;
    double shrinkage_c = 3.0;
    double target_mu = 0.0;            // per period, required
    bool long_only = true;
    std::uint64_t seed = 1;
    std::int64_t mc_draws = 5000;
    std::int64_t bootstrap_b = 1000;
};

ExperimentConfig load_config(const std::string& path);
void apply_config_line(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Metrics of one weight vector over one date segment.
struct SegmentMetrics {
    int n = 0;
    double volatility = 0.0;             // per period
    double volatility_annualized = 0.0;  // x sqrt(periods_per_year)
    std::map<double, double> var_at;     // alpha -> VaR (return units)
    std::map<double, double> es_at;      // alpha -> ES
};

struct SchemeResult {
    Portfolio portfolio;
    SegmentMetrics before;
    SegmentMetrics during;
};

/// Self-describing output of a comparison run; re-runnable from the embedded
/// config.
struct ComparisonReport {
    std::string schema_version = "1";
    std::string software_version;
    ExperimentConfig config;
    Date sample_start, sample_end;
    int n_before = 0, n_during = 0, n_assets = 0;
    int dropped_rows = 0;
    std::vector<std::pair<std::string, SchemeResult>> schemes;  // index-cap, markowitz, equal
};

/// Runs the full comparison: split at the event date, estimate Markowitz
/// weights on the before segment only, hold all three weight vectors fixed,
/// and measure volatility / VaR / ES per segment.
ComparisonReport run_comparison(const ExperimentConfig& config);
ComparisonReport run_comparison(const ExperimentConfig& config, const PriceTable& table);

enum class ReportFormat { json, csv, markdown };

std::string render_report(const ComparisonReport& report, ReportFormat format);

/// Renders and writes the report; bit-stable for identical reports.
void emit_report(const ComparisonReport& report, ReportFormat format, const std::string& path);

}  // namespace qrisk
