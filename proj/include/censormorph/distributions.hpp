#pragma once

// Tail probabilities used by the test battery, built on the regularized
// incomplete gamma and beta functions and the complementary error function.
//
// All functions throw InvalidParameter for non-positive shape or degrees of
// freedom, and NumericalFailure if a continued fraction fails to converge.

namespace censormorph {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b), a, b > 0, 0 <= x <= 1.
double regularized_beta(double x, double a, double b);

double norm_sf(double x);
double norm_cdf(double x);
/// Inverse of norm_cdf on (0, 1).
double norm_quantile(double p);

/// Upper tail of chi-square with `df` degrees of freedom; 1 for x <= 0.
double chi2_sf(double x, double df);
/// Upper tail of F(d1, d2); 1 for x <= 0.
double f_sf(double x, double d1, double d2);
/// Upper tail of Student t with `df` degrees of freedom.
double t_sf(double x, double df);
/// Upper tail of the Kolmogorov limit distribution,
/// Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2); 1 for lambda <= 0.
double kolmogorov_sf(double lambda);

}  // namespace censormorph
