#include "qrisk/timeseries.hpp"

#include <cmath>

#include "qrisk/errors.hpp"

namespace qrisk {

PriceSeries PriceSeries::make(std::vector<Date> dates, std::vector<double> values) {
    if (dates.size() != values.size())
        throw ShapeError("PriceSeries: dates and values differ in length");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0))
            throw DomainError("PriceSeries: non-positive price at " + dates[i].to_string());
        if (i > 0 && !(dates[i - 1] < dates[i]))
            throw DomainError("PriceSeries: dates not strictly increasing at " + dates[i].to_string());
    }
    return PriceSeries{std::move(dates), std::move(values)};
}

ReturnSeries net_return(const PriceSeries& series) {
    if (series.size() < 2) throw EmptyWindow("net_return: need at least 2 prices");
    ReturnSeries out;
    out.kind = ReturnKind::net;
    out.dates.assign(series.dates.begin() + 1, series.dates.end());
    out.values.resize(series.size() - 1);
    for (std::size_t t = 1; t < series.size(); ++t)
        out.values[t - 1] = series.values[t] / series.values[t - 1] - 1.0;
    return out;
}

double gross_return_k(const PriceSeries& series, int k) {
    if (k < 1) throw IndexError("gross_return_k: k must be >= 1");
    if (series.size() <= static_cast<std::size_t>(k))
        throw IndexError("gross_return_k: series length must exceed k");
    const std::size_t t = series.size() - 1;
    return series.values[t] / series.values[t - static_cast<std::size_t>(k)];
}

ReturnSeries log_return(const PriceSeries& series) {
    if (series.size() < 2) throw EmptyWindow("log_return: need at least 2 prices");
    ReturnSeries out;
    out.kind = ReturnKind::log;
    out.dates.assign(series.dates.begin() + 1, series.dates.end());
    out.values.resize(series.size() - 1);
    for (std::size_t t = 1; t < series.size(); ++t) {
        if (!(series.values[t] > 0.0) || !(series.values[t - 1] > 0.0))
            throw DomainError("log_return: non-positive price");
        out.values[t - 1] = std::log(series.values[t]) - std::log(series.values[t - 1]);
    }
    return out;
}

double horizon_volatility(double sigma_1, int k) {
    if (sigma_1 < 0.0) throw DomainError("horizon_volatility: sigma must be >= 0");
    if (k < 1) throw DomainError("horizon_volatility: k must be >= 1");
    return std::sqrt(static_cast<double>(k)) * sigma_1;
}

double compound(double value, double rate, int m, double years) {
    if (!(value > 0.0)) throw DomainError("compound: value must be positive");
    if (m < 1) throw DomainError("compound: m must be >= 1");
    return value * std::pow(1.0 + rate / static_cast<double>(m), static_cast<double>(m) * years);
}

}  // namespace qrisk
