#include "qrisk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qrisk/capm.hpp"
#include "qrisk/errors.hpp"
#include "qrisk/tailrisk.hpp"
#include "qrisk/version.hpp"

namespace qrisk {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

SegmentMetrics segment_metrics(const Eigen::VectorXd& portfolio_returns,
                               const std::vector<double>& var_levels, int periods_per_year) {
    SegmentMetrics m;
    m.n = static_cast<int>(portfolio_returns.size());
    const double mean = portfolio_returns.mean();
    m.volatility = std::sqrt((portfolio_returns.array() - mean).square().sum() /
                             static_cast<double>(portfolio_returns.size() - 1));
    m.volatility_annualized = m.volatility * std::sqrt(static_cast<double>(periods_per_year));
    const std::span<const double> view(portfolio_returns.data(),
                                       static_cast<std::size_t>(portfolio_returns.size()));
    for (double alpha : var_levels) {
        const TailRiskReport tr = tail_risk(view, alpha);
        m.var_at[alpha] = tr.var_alpha;
        m.es_at[alpha] = tr.es_alpha;
    }
    return m;
}

std::string format_level(double alpha) {
    std::ostringstream s;
    s << alpha;
    return s.str();
}

ordered_json config_to_json(const ExperimentConfig& c) {
    ordered_json j;
    j["price_file"] = c.price_file;
    j["market_column"] = c.market_column;
    j["assets"] = c.assets;
    j["index_weights_file"] = c.index_weights_file;
    j["event_date"] = c.event_date.to_string();
    j["risk_free_annual"] = c.risk_free_annual;
    j["periods_per_year"] = c.periods_per_year;
    j["var_levels"] = c.var_levels;
    j["cov_mode"] = c.cov_mode == CovMode::bayes ? "bayes" : "sample";
    j["shrinkage_c"] = c.shrinkage_c;
    j["target_mu"] = c.target_mu;
    j["long_only"] = c.long_only;
    j["seed"] = c.seed;
    j["mc_draws"] = c.mc_draws;
    j["bootstrap_b"] = c.bootstrap_b;
    return j;
}

ordered_json metrics_to_json(const SegmentMetrics& m) {
    ordered_json j;
    j["n"] = m.n;
    j["volatility"] = m.volatility;
    j["volatility_annualized"] = m.volatility_annualized;
    ordered_json var_j, es_j;
    for (const auto& [alpha, v] : m.var_at) var_j[format_level(alpha)] = v;
    for (const auto& [alpha, v] : m.es_at) es_j[format_level(alpha)] = v;
    j["var"] = var_j;
    j["es"] = es_j;
    return j;
}

}  // namespace

void apply_config_line(ExperimentConfig& config, const std::string& key, const std::string& value) {
    if (key == "price_file") config.price_file = value;
    else if (key == "market_column") config.market_column = value;
    else if (key == "assets") config.assets = split_list(value);
    else if (key == "index_weights_file") config.index_weights_file = value;
    else if (key == "event_date") config.event_date = Date::parse(value);
    else if (key == "risk_free_annual") config.risk_free_annual = std::stod(value);
    else if (key == "periods_per_year") config.periods_per_year = std::stoi(value);
    else if (key == "var_levels") {
        config.var_levels.clear();
        for (const auto& item : split_list(value)) config.var_levels.push_back(std::stod(item));
    } else if (key == "cov_mode") {
        if (value == "sample") config.cov_mode = CovMode::sample;
        else if (value == "bayes") config.cov_mode = CovMode::bayes;
        else throw InvalidSpec("config: cov_mode must be 'sample' or 'bayes'");
    } else if (key == "shrinkage_c") config.shrinkage_c = std::stod(value);
    else if (key == "target_mu") config.target_mu = std::stod(value);
    else if (key == "long_only") config.long_only = value == "true" || value == "1";
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "mc_draws") config.mc_draws = std::stoll(value);
    else if (key == "bootstrap_b") config.bootstrap_b = std::stoll(value);
    else throw InvalidSpec("config: unknown key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidSpec(path + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = line.substr(start, eq - start);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        try {
            apply_config_line(config, key, value);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw InvalidSpec(path + ":" + std::to_string(line_no) + ": bad value for '" + key +
                              "': " + e.what());
        }
    }
    return config;
}

ComparisonReport run_comparison(const ExperimentConfig& config, const PriceTable& table) {
    if (config.assets.size() < 2) throw InvalidSpec("compare: need at least 2 assets");
    for (double alpha : config.var_levels)
        if (!(alpha > 0.0 && alpha < 1.0))
            throw InvalidSpec("compare: VaR levels must lie in (0,1)");
    if (config.periods_per_year < 1) throw InvalidSpec("compare: periods_per_year must be >= 1");
    if (config.mc_draws < 1) throw InvalidSpec("compare: mc_draws must be >= 1");

    const IngestResult ingested = ingest(table, config.assets);
    const ReturnPanel& panel = ingested.panel;
    const auto p = static_cast<int>(panel.cols());

    // Split at the event date: a return dated on/after the event belongs to
    // the during segment.
    Eigen::Index n_before = 0;
    while (n_before < panel.rows() &&
           panel.dates[static_cast<std::size_t>(n_before)] < config.event_date)
        ++n_before;
    const Eigen::Index n_during = panel.rows() - n_before;
    if (n_before < 2 || n_during < 2)
        throw InvalidSpec("compare: event date must split the sample with >= 2 returns each side");

    const Eigen::MatrixXd before = panel.matrix.topRows(n_before);
    const Eigen::MatrixXd during = panel.matrix.bottomRows(n_during);

    // Index (cap) weights come from the input file, never computed.
    Portfolio cap;
    cap.assets = config.assets;
    cap.scheme = WeightScheme::index_cap;
    cap.weights.resize(p);
    {
        if (config.index_weights_file.empty())
            throw InvalidSpec("compare: index_weights_file is required");
        const auto pairs = read_weights_csv(config.index_weights_file);
        std::map<std::string, double> lookup(pairs.begin(), pairs.end());
        double total = 0.0;
        for (int i = 0; i < p; ++i) {
            const auto it = lookup.find(config.assets[static_cast<std::size_t>(i)]);
            if (it == lookup.end())
                throw SchemaError("compare: no index weight for asset '" +
                                  config.assets[static_cast<std::size_t>(i)] + "'");
            cap.weights(i) = it->second;
            total += it->second;
        }
        if (!(total > 0.0)) throw SchemaError("compare: index weights must sum to a positive value");
        cap.weights /= total;
    }

    // Markowitz weights are estimated on the before segment only.
    ReturnPanel before_panel = panel;
    before_panel.matrix = before;
    before_panel.dates.assign(panel.dates.begin(), panel.dates.begin() + n_before);
    const CovarianceEstimate sample_cov = sample_covariance(before_panel);
    CovarianceEstimate markowitz_cov;
    if (config.cov_mode == CovMode::bayes) {
        const InverseWishartPosterior post =
            build_posterior(sample_cov, static_cast<int>(n_before), config.shrinkage_c);
        markowitz_cov = posterior_mode(post, static_cast<int>(n_before));
    } else {
        markowitz_cov = sample_cov;
    }
    const Eigen::VectorXd mean_before = before.colwise().mean();
    Portfolio markowitz = markowitz_optimize(mean_before, markowitz_cov, config.target_mu,
                                             config.long_only, config.assets);

    Portfolio equal = equal_weight(config.assets);

    ComparisonReport report;
    report.software_version = kVersion;
    report.config = config;
    report.sample_start = panel.dates.front();
    report.sample_end = panel.dates.back();
    report.n_before = static_cast<int>(n_before);
    report.n_during = static_cast<int>(n_during);
    report.n_assets = p;
    report.dropped_rows = ingested.dropped_rows;

    const std::vector<std::pair<std::string, Portfolio>> entries = {
        {"index-cap", std::move(cap)},
        {"markowitz", std::move(markowitz)},
        {"equal", std::move(equal)},
    };
    for (const auto& [name, port] : entries) {
        SchemeResult res;
        res.portfolio = port;
        res.before = segment_metrics(before * port.weights, config.var_levels,
                                     config.periods_per_year);
        res.during = segment_metrics(during * port.weights, config.var_levels,
                                     config.periods_per_year);
        report.schemes.emplace_back(name, std::move(res));
    }
    return report;
}

ComparisonReport run_comparison(const ExperimentConfig& config) {
    if (config.price_file.empty()) throw InvalidSpec("compare: price_file is required");
    return run_comparison(config, read_price_csv(config.price_file));
}

std::string render_report(const ComparisonReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json j;
        j["schema_version"] = report.schema_version;
        j["software_version"] = report.software_version;
        j["config"] = config_to_json(report.config);
        ordered_json sample;
        sample["start"] = report.sample_start.to_string();
        sample["event"] = report.config.event_date.to_string();
        sample["end"] = report.sample_end.to_string();
        sample["n_before"] = report.n_before;
        sample["n_during"] = report.n_during;
        sample["n_assets"] = report.n_assets;
        sample["dropped_rows"] = report.dropped_rows;
        j["sample"] = sample;
        ordered_json schemes;
        for (const auto& [name, res] : report.schemes) {
            ordered_json s;
            ordered_json weights;
            for (Eigen::Index i = 0; i < res.portfolio.size(); ++i)
                weights[res.portfolio.assets[static_cast<std::size_t>(i)]] =
                    res.portfolio.weights(i);
            s["weights"] = weights;
            s["before"] = metrics_to_json(res.before);
            s["during"] = metrics_to_json(res.during);
            schemes[name] = s;
        }
        j["schemes"] = schemes;
        return j.dump(2) + "\n";
    }

    if (format == ReportFormat::csv) {
        std::ostringstream out;
        out.precision(17);
        out << "scheme,segment,n,volatility,volatility_annualized";
        for (double alpha : report.config.var_levels)
            out << ",var_" << format_level(alpha) << ",es_" << format_level(alpha);
        out << "\n";
        for (const auto& [name, res] : report.schemes) {
            for (const auto* seg : {&res.before, &res.during}) {
                out << name << "," << (seg == &res.before ? "before" : "during") << "," << seg->n
                    << "," << seg->volatility << "," << seg->volatility_annualized;
                for (double alpha : report.config.var_levels)
                    out << "," << seg->var_at.at(alpha) << "," << seg->es_at.at(alpha);
                out << "\n";
            }
        }
        return out.str();
    }

    // Markdown comparison table, metrics x schemes, values in percent.
    std::ostringstream out;
    out.precision(4);
    out << std::fixed;
    out << "| Metric |";
    for (const auto& [name, res] : report.schemes) out << " " << name << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < report.schemes.size(); ++i) out << "---|";
    out << "\n";
    const auto emit_row = [&](const std::string& label, auto getter) {
        out << "| " << label << " |";
        for (const auto& [name, res] : report.schemes) out << " " << getter(res) << " |";
        out << "\n";
    };
    emit_row("volatility before (%)",
             [](const SchemeResult& r) { return 100.0 * r.before.volatility; });
    emit_row("volatility during (%)",
             [](const SchemeResult& r) { return 100.0 * r.during.volatility; });
    for (double alpha : report.config.var_levels) {
        emit_row("VaR " + format_level(alpha) + " before (%)",
                 [&](const SchemeResult& r) { return 100.0 * r.before.var_at.at(alpha); });
        emit_row("VaR " + format_level(alpha) + " during (%)",
                 [&](const SchemeResult& r) { return 100.0 * r.during.var_at.at(alpha); });
        emit_row("ES " + format_level(alpha) + " before (%)",
                 [&](const SchemeResult& r) { return 100.0 * r.before.es_at.at(alpha); });
        emit_row("ES " + format_level(alpha) + " during (%)",
                 [&](const SchemeResult& r) { return 100.0 * r.during.es_at.at(alpha); });
    }
    return out.str();
}

void emit_report(const ComparisonReport& report, ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report: " + path);
    out << render_report(report, format);
    if (!out) throw IoError("failed writing report: " + path);
}

}  // namespace qrisk
