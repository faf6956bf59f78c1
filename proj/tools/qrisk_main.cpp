#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <span>

#include "qrisk/bootstrap.hpp"
#include "qrisk/capm.hpp"
#include "qrisk/covariance.hpp"
#include "qrisk/csv.hpp"
#include "qrisk/efficiency.hpp"
#include "qrisk/errors.hpp"
#include "qrisk/experiment.hpp"
#include "qrisk/portfolio.hpp"
#include "qrisk/pricing.hpp"
#include "qrisk/tailrisk.hpp"
#include "qrisk/timeseries.hpp"
#include "qrisk/version.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace qrisk;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write output file: " + path);
    out << text;
}

ordered_json test_result_json(const TestResult& r) {
    ordered_json j;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["lags_used"] = r.lags_used;
    j["null_hypothesis"] = r.null_hypothesis;
    ordered_json decisions;
    for (const auto& [level, reject] : r.decision_at) {
        std::ostringstream key;
        key << level;
        decisions[key.str()] = reject ? "reject" : "fail-to-reject";
    }
    j["decision_at"] = decisions;
    if (r.p_value_clamped) j["p_value_clamped"] = true;
    return j;
}

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> levels;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) levels.push_back(std::stod(item));
    if (levels.empty()) throw InvalidSpec("no VaR levels given");
    return levels;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qrisk: market efficiency, CAPM, portfolio and tail-risk analytics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string input, output, format = "json";
    std::uint64_t seed = 1;

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "Build an aligned log-return panel from a price CSV");
    std::string ingest_columns;
    ingest_cmd->add_option("--input", input, "price CSV")->required();
    ingest_cmd->add_option("--columns", ingest_columns, "comma-separated column names")->required();
    ingest_cmd->add_option("--output", output, "output file (default stdout)");

    // efficiency-test
    auto* eff_cmd = app.add_subcommand("efficiency-test", "Run the market-efficiency test battery");
    std::string eff_column;
    int eff_lags = 10;
    eff_cmd->add_option("--input", input, "price CSV")->required();
    eff_cmd->add_option("--column", eff_column, "price column to test")->required();
    eff_cmd->add_option("--lags", eff_lags, "Ljung-Box lag count");
    eff_cmd->add_option("--output", output, "output file (default stdout)");

    // capm
    auto* capm_cmd = app.add_subcommand("capm", "Fit the CAPM by OLS, optionally with bootstrap inference");
    std::string capm_market, capm_asset, capm_bootstrap;
    double capm_rf = 0.0;
    int capm_ppy = 252;
    std::int64_t capm_b = 1000;
    capm_cmd->add_option("--prices", input, "price CSV")->required();
    capm_cmd->add_option("--market", capm_market, "market index column")->required();
    capm_cmd->add_option("--asset", capm_asset, "asset column")->required();
    capm_cmd->add_option("--rf", capm_rf, "annual risk-free rate");
    capm_cmd->add_option("--periods-per-year", capm_ppy, "trading periods per year");
    capm_cmd->add_option("--bootstrap", capm_bootstrap, "bootstrap scheme: residual|paired");
    capm_cmd->add_option("--B", capm_b, "bootstrap replications");
    capm_cmd->add_option("--seed", seed, "random seed");
    capm_cmd->add_option("--format", format, "json|csv");
    capm_cmd->add_option("--output", output, "output file (default stdout)");

    // optimize
    auto* opt_cmd = app.add_subcommand("optimize", "Markowitz minimum-variance weights");
    std::string opt_assets, opt_cov = "bayes";
    double opt_target = 0.0, opt_c = 3.0;
    bool opt_unconstrained = false;
    opt_cmd->add_option("--prices", input, "price CSV")->required();
    opt_cmd->add_option("--assets", opt_assets, "comma-separated asset columns")->required();
    opt_cmd->add_option("--target-mu", opt_target, "target per-period mean return")->required();
    opt_cmd->add_option("--cov", opt_cov, "covariance estimator: sample|bayes");
    opt_cmd->add_option("--c", opt_c, "prior strength c for the bayes estimator");
    opt_cmd->add_flag("--allow-short", opt_unconstrained, "drop the long-only constraint");
    opt_cmd->add_option("--output", output, "weights CSV (default stdout)");

    // risk-report
    auto* risk_cmd = app.add_subcommand("risk-report", "Volatility, MCTR/CCTR and tail risk for a weight file");
    std::string risk_weights, risk_cov = "sample", risk_levels = "0.05";
    double risk_c = 3.0;
    std::int64_t risk_draws = 5000;
    unsigned risk_workers = 1;
    risk_cmd->add_option("--prices", input, "price CSV")->required();
    risk_cmd->add_option("--weights", risk_weights, "weights CSV (asset,weight)")->required();
    risk_cmd->add_option("--cov", risk_cov, "sample|bayes");
    risk_cmd->add_option("--c", risk_c, "prior strength c");
    risk_cmd->add_option("--draws", risk_draws, "Monte Carlo draws for the bayes mode");
    risk_cmd->add_option("--workers", risk_workers, "worker threads for the Monte Carlo");
    risk_cmd->add_option("--var-levels", risk_levels, "comma-separated VaR levels");
    risk_cmd->add_option("--seed", seed, "random seed");
    risk_cmd->add_option("--output", output, "output file (default stdout)");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Before/during-event comparison of cap, equal and Markowitz portfolios");
    std::string cmp_config;
    std::vector<std::string> cmp_set;
    cmp_cmd->add_option("--config", cmp_config, "flat key=value config file");
    cmp_cmd->add_option("--set", cmp_set, "config override key=value (repeatable)");
    cmp_cmd->add_option("--format", format, "json|csv|markdown");
    cmp_cmd->add_option("--output", output, "output file (default stdout)");

    // simulate-gbm
    auto* gbm_cmd = app.add_subcommand("simulate-gbm", "Terminal-value GBM Monte Carlo");
    double gbm_p0 = 100.0, gbm_mu = 0.0, gbm_sigma = 0.2, gbm_t = 1.0;
    std::int64_t gbm_paths = 100000;
    bool gbm_risk_neutral = false;
    gbm_cmd->add_option("--p0", gbm_p0, "initial price");
    gbm_cmd->add_option("--mu", gbm_mu, "drift per unit time (risk-free rate when --risk-neutral)");
    gbm_cmd->add_option("--sigma", gbm_sigma, "volatility per unit time");
    gbm_cmd->add_option("--t", gbm_t, "horizon");
    gbm_cmd->add_option("--paths", gbm_paths, "number of paths");
    gbm_cmd->add_flag("--risk-neutral", gbm_risk_neutral, "interpret mu as the risk-free rate");
    gbm_cmd->add_option("--seed", seed, "random seed");
    gbm_cmd->add_option("--output", output, "also write per-path terminal prices CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest_cmd->parsed()) {
            std::vector<std::string> columns;
            std::stringstream stream(ingest_columns);
            std::string item;
            while (std::getline(stream, item, ',')) columns.push_back(item);
            const IngestResult result = ingest_file(input, columns);
            std::ostringstream out;
            out.precision(17);
            out << "date";
            for (const auto& a : result.panel.assets) out << "," << a;
            out << "\n";
            for (Eigen::Index i = 0; i < result.panel.rows(); ++i) {
                out << result.panel.dates[static_cast<std::size_t>(i)].to_string();
                for (Eigen::Index j = 0; j < result.panel.cols(); ++j)
                    out << "," << result.panel.matrix(i, j);
                out << "\n";
            }
            write_output(out.str(), output);
            std::cerr << "rows dropped in alignment: " << result.dropped_rows << "\n";
        } else if (eff_cmd->parsed()) {
            const PriceTable table = read_price_csv(input);
            const PriceSeries series = column_series(table, eff_column);
            const EfficiencyBattery battery = efficiency_battery(series, eff_lags);
            ordered_json j;
            j["column"] = eff_column;
            j["n_prices"] = series.size();
            j["steps"] = ordered_json{
                {"prices_unit_root", test_result_json(battery.prices_unit_root)},
                {"returns_unit_root", test_result_json(battery.returns_unit_root)},
                {"returns_autocorrelation", test_result_json(battery.returns_autocorr)},
                {"returns_normality", test_result_json(battery.returns_normality)},
            };
            j["verdict"] = ordered_json{
                {"prices_nonstationary", battery.verdict.prices_nonstationary},
                {"returns_stationary", battery.verdict.returns_stationary},
                {"returns_uncorrelated", battery.verdict.returns_uncorrelated},
                {"returns_gaussian", battery.verdict.returns_gaussian},
                {"verdict", battery.verdict.verdict == Verdict::efficient_consistent
                                ? "efficient-consistent"
                                : "not-efficient"},
            };
            write_output(j.dump(2) + "\n", output);
        } else if (capm_cmd->parsed()) {
            const IngestResult ingested = ingest_file(input, {capm_market, capm_asset});
            const ReturnPanel premia = risk_premium(ingested.panel, capm_rf, capm_ppy);
            const FactorDesign design =
                FactorDesign::single_factor(premia.matrix.col(0), capm_market,
                                            capm_rf / static_cast<double>(capm_ppy));
            ReturnPanel asset_panel = premia;
            asset_panel.assets = {capm_asset};
            asset_panel.matrix = premia.matrix.col(1);
            const FactorFit fit = fit_capm(design, asset_panel);

            ordered_json j;
            j["market"] = capm_market;
            j["asset"] = capm_asset;
            j["n"] = static_cast<int>(design.n());
            j["risk_free_annual"] = capm_rf;
            j["ols"] = ordered_json{
                {"alpha", fit.coefficients(0, 0)},
                {"beta", fit.coefficients(1, 0)},
                {"alpha_se", fit.std_errors(0, 0)},
                {"beta_se", fit.std_errors(1, 0)},
                {"r_squared", fit.r_squared(0)},
                {"residual_sd", std::sqrt(fit.residual_var(0))},
            };
            std::string csv_text = "coefficient,estimate,std_error\n";
            csv_text += "alpha," + std::to_string(fit.coefficients(0, 0)) + "," +
                        std::to_string(fit.std_errors(0, 0)) + "\n";
            csv_text += "beta," + std::to_string(fit.coefficients(1, 0)) + "," +
                        std::to_string(fit.std_errors(1, 0)) + "\n";

            if (!capm_bootstrap.empty()) {
                BootstrapSpec spec;
                spec.replications = capm_b;
                spec.seed = seed;
                if (capm_bootstrap == "residual") spec.scheme = BootstrapScheme::residual;
                else if (capm_bootstrap == "paired") spec.scheme = BootstrapScheme::paired;
                else throw InvalidSpec("capm: --bootstrap must be residual or paired");
                const BootstrapSummary summary = spec.scheme == BootstrapScheme::residual
                                                     ? residual_bootstrap_capm(design, asset_panel, spec)
                                                     : paired_bootstrap_capm(design, asset_panel, spec);
                ordered_json boot;
                boot["scheme"] = capm_bootstrap;
                boot["replications"] = capm_b;
                boot["seed"] = seed;
                if (summary.redraws > 0) boot["redraws"] = summary.redraws;
                for (const auto& st : summary.statistics) {
                    boot[st.name] = ordered_json{
                        {"estimate", st.estimate},
                        {"mean", st.mean},
                        {"std_error", st.std_error},
                        {"percentile_ci", {st.percentile_lo, st.percentile_hi}},
                        {"normal_ci", {st.normal_lo, st.normal_hi}},
                    };
                }
                j["bootstrap"] = boot;
            }
            write_output(format == "csv" ? csv_text : j.dump(2) + "\n", output);
        } else if (opt_cmd->parsed()) {
            std::vector<std::string> assets;
            std::stringstream stream(opt_assets);
            std::string item;
            while (std::getline(stream, item, ',')) assets.push_back(item);
            const IngestResult ingested = ingest_file(input, assets);
            const CovarianceEstimate sample_cov = sample_covariance(ingested.panel);
            CovarianceEstimate cov;
            if (opt_cov == "bayes") {
                const auto post = build_posterior(sample_cov,
                                                  static_cast<int>(ingested.panel.rows()), opt_c);
                cov = posterior_mode(post, static_cast<int>(ingested.panel.rows()));
            } else if (opt_cov == "sample") {
                cov = sample_cov;
            } else {
                throw InvalidSpec("optimize: --cov must be sample or bayes");
            }
            const Eigen::VectorXd mean = ingested.panel.matrix.colwise().mean();
            const Portfolio port =
                markowitz_optimize(mean, cov, opt_target, !opt_unconstrained, assets);
            std::ostringstream out;
            out.precision(17);
            out << "asset,weight\n";
            for (Eigen::Index i = 0; i < port.size(); ++i)
                out << port.assets[static_cast<std::size_t>(i)] << "," << port.weights(i) << "\n";
            write_output(out.str(), output);
        } else if (risk_cmd->parsed()) {
            const auto pairs = read_weights_csv(risk_weights);
            std::vector<std::string> assets;
            Eigen::VectorXd weights(static_cast<Eigen::Index>(pairs.size()));
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                assets.push_back(pairs[i].first);
                weights(static_cast<Eigen::Index>(i)) = pairs[i].second;
            }
            const double total = weights.sum();
            if (!(total > 0.0)) throw InvalidSpec("risk-report: weights must sum to a positive value");
            weights /= total;
            Portfolio port;
            port.assets = assets;
            port.weights = weights;
            port.scheme = WeightScheme::custom;

            const IngestResult ingested = ingest_file(input, assets);
            const auto n = static_cast<int>(ingested.panel.rows());
            const CovarianceEstimate sample_cov = sample_covariance(ingested.panel);
            const std::vector<double> levels = parse_levels(risk_levels);

            ordered_json j;
            j["n_returns"] = n;
            j["assets"] = assets;
            ordered_json weights_j;
            for (std::size_t i = 0; i < assets.size(); ++i)
                weights_j[assets[i]] = weights(static_cast<Eigen::Index>(i));
            j["weights"] = weights_j;

            const Eigen::VectorXd realized = ingested.panel.matrix * weights;
            ordered_json tail;
            for (double alpha : levels) {
                const TailRiskReport tr = tail_risk(
                    std::span<const double>(realized.data(), static_cast<std::size_t>(realized.size())),
                    alpha);
                std::ostringstream key;
                key << alpha;
                tail[key.str()] = ordered_json{{"var", tr.var_alpha},
                                               {"es", tr.es_alpha},
                                               {"n_tail", tr.n_tail}};
            }
            j["tail_risk"] = tail;

            if (risk_cov == "bayes") {
                const auto post = build_posterior(sample_cov, n, risk_c);
                const CovarianceEstimate mode = posterior_mode(post, n);
                const RiskDecomposition analytic = risk_decomposition(port, mode);
                const RiskDecomposition mc = bayes_mc_risk(port, post, risk_draws, seed, risk_workers);
                ordered_json decomp;
                decomp["sigma_p"] = analytic.sigma_p;
                decomp["sigma_p_annualized"] = analytic.sigma_p * std::sqrt(252.0);
                decomp["posterior_mean_sigma_p"] = mc.sigma_p;
                decomp["draws"] = mc.draws_used;
                ordered_json per_asset;
                for (std::size_t i = 0; i < assets.size(); ++i) {
                    const auto idx = static_cast<Eigen::Index>(i);
                    per_asset[assets[i]] = ordered_json{{"mctr", mc.mctr(idx)},
                                                        {"cctr", mc.cctr(idx)},
                                                        {"prob_cctr_positive", mc.prob_positive(idx)}};
                }
                decomp["per_asset"] = per_asset;
                j["risk_decomposition"] = decomp;
            } else if (risk_cov == "sample") {
                const RiskDecomposition analytic = risk_decomposition(port, sample_cov);
                ordered_json decomp;
                decomp["sigma_p"] = analytic.sigma_p;
                decomp["sigma_p_annualized"] = analytic.sigma_p * std::sqrt(252.0);
                ordered_json per_asset;
                for (std::size_t i = 0; i < assets.size(); ++i) {
                    const auto idx = static_cast<Eigen::Index>(i);
                    per_asset[assets[i]] =
                        ordered_json{{"mctr", analytic.mctr(idx)}, {"cctr", analytic.cctr(idx)}};
                }
                decomp["per_asset"] = per_asset;
                j["risk_decomposition"] = decomp;
            } else {
                throw InvalidSpec("risk-report: --cov must be sample or bayes");
            }
            write_output(j.dump(2) + "\n", output);
        } else if (cmp_cmd->parsed()) {
            ExperimentConfig config;
            if (!cmp_config.empty()) config = load_config(cmp_config);
            for (const auto& kv : cmp_set) {
                const std::size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    throw InvalidSpec("compare: --set expects key=value, got '" + kv + "'");
                apply_config_line(config, kv.substr(0, eq), kv.substr(eq + 1));
            }
            const ComparisonReport report = run_comparison(config);
            ReportFormat fmt;
            if (format == "json") fmt = ReportFormat::json;
            else if (format == "csv") fmt = ReportFormat::csv;
            else if (format == "markdown") fmt = ReportFormat::markdown;
            else throw InvalidSpec("compare: --format must be json, csv or markdown");
            write_output(render_report(report, fmt), output);
        } else if (gbm_cmd->parsed()) {
            GbmParams params;
            params.p0 = gbm_p0;
            params.mu = gbm_mu;
            params.sigma = gbm_sigma;
            params.measure = gbm_risk_neutral ? Measure::risk_neutral : Measure::real_world;
            const std::vector<double> terminal = simulate_gbm(params, gbm_t, gbm_paths, seed);
            const double mean =
                std::accumulate(terminal.begin(), terminal.end(), 0.0) / terminal.size();
            double var = 0.0;
            double log_mean = 0.0;
            for (double v : terminal) log_mean += std::log(v);
            log_mean /= static_cast<double>(terminal.size());
            for (double v : terminal) var += (v - mean) * (v - mean);
            var /= static_cast<double>(terminal.size() - 1);
            ordered_json j;
            j["paths"] = gbm_paths;
            j["t"] = gbm_t;
            j["mean_terminal"] = mean;
            j["sd_terminal"] = std::sqrt(var);
            j["mean_log_terminal"] = log_mean;
            if (gbm_risk_neutral)
                j["mean_discounted"] = mean * std::exp(-gbm_mu * gbm_t);
            std::cout << j.dump(2) << "\n";
            if (!output.empty()) {
                std::ofstream out(output, std::ios::binary);
                if (!out) throw IoError("cannot write output file: " + output);
                out.precision(17);
                out << "path,terminal_price\n";
                for (std::size_t i = 0; i < terminal.size(); ++i)
                    out << i << "," << terminal[i] << "\n";
            }
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
