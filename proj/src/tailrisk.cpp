#include "qrisk/tailrisk.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qrisk/errors.hpp"

namespace qrisk {

namespace {

std::vector<double> sorted_checked(std::span<const double> returns, double alpha) {
    if (returns.empty()) throw EmptyInput("tail risk: empty return sample");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("tail risk: alpha must lie in (0,1)");
    std::vector<double> s(returns.begin(), returns.end());
    std::sort(s.begin(), s.end());
    return s;
}

std::size_t var_index(std::size_t n, double alpha) {
    const auto idx = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n)));
    return std::clamp<std::size_t>(idx, 1, n) - 1;  // 0-based
}

}  // namespace

double empirical_var(std::span<const double> returns, double alpha) {
    const std::vector<double> s = sorted_checked(returns, alpha);
    return s[var_index(s.size(), alpha)];
}

double empirical_es(std::span<const double> returns, double alpha) {
    const std::vector<double> s = sorted_checked(returns, alpha);
    const double var = s[var_index(s.size(), alpha)];
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : s) {
        if (v > var) break;
        sum += v;
        ++count;
    }
    return sum / static_cast<double>(count);
}

TailRiskReport tail_risk(std::span<const double> returns, double alpha) {
    const std::vector<double> s = sorted_checked(returns, alpha);
    TailRiskReport r;
    r.alpha = alpha;
    r.var_alpha = s[var_index(s.size(), alpha)];
    double sum = 0.0;
    int count = 0;
    for (double v : s) {
        if (v > r.var_alpha) break;
        sum += v;
        ++count;
    }
    r.es_alpha = sum / count;
    r.n_tail = count;
    return r;
}

}  // namespace qrisk
