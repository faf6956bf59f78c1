#pragma once

namespace qrisk::special {

/// Standard normal CDF.
double norm_cdf(double z);

/// Standard normal upper tail P(Z > z).
double norm_upper(double z);

/// Inverse standard normal CDF (Wichura's PPND16). p in (0,1).
double norm_inv(double p);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_upper(double x, double df);

}  // namespace qrisk::special
