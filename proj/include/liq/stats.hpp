#pragma once

#include <cstddef>
#include <vector>

namespace liq::stats {

// Mean / population variance (divisor n) over finite entries only.
// Empty input (or all-NaN) yields NaN.
double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);  // population, around the sample mean
double stddev(const std::vector<double>& xs);

// Pearson correlation over pairwise-finite entries; NaN if fewer than 2 pairs
// or either side is constant.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Linear-interpolation quantile (the common "type 7" rule: h = (n-1)q) over
// finite entries. q must lie in [0, 1]; NaN on empty input.
double quantile(std::vector<double> xs, double q);
double median(std::vector<double> xs);

// Regularized incomplete gamma functions.
// lower_gamma_regularized = P(a, x), upper_gamma_regularized = Q(a, x) = 1 - P.
// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double lower_gamma_regularized(double a, double x);
double upper_gamma_regularized(double a, double x);

// Upper tail of the chi-squared distribution with df degrees of freedom:
// P[X >= x] = Q(df/2, x/2).
double chi2_sf(double x, double df);

}  // namespace liq::stats
