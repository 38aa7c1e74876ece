#include "liq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace liq::stats {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> finite_only(const std::vector<double>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs)
        if (std::isfinite(x)) out.push_back(x);
    return out;
}
}  // namespace

double mean(const std::vector<double>& xs) {
    double sum = 0;
    size_t n = 0;
    for (double x : xs) {
        if (!std::isfinite(x)) continue;
        sum += x;
        ++n;
    }
    return n ? sum / static_cast<double>(n) : kNaN;
}

double variance(const std::vector<double>& xs) {
    double m = mean(xs);
    if (std::isnan(m)) return kNaN;
    double sum = 0;
    size_t n = 0;
    for (double x : xs) {
        if (!std::isfinite(x)) continue;
        sum += (x - m) * (x - m);
        ++n;
    }
    return sum / static_cast<double>(n);
}

double stddev(const std::vector<double>& xs) { return std::sqrt(variance(xs)); }

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
    double sx = 0, sy = 0;
    size_t n = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
        sx += xs[i];
        sy += ys[i];
        ++n;
    }
    if (n < 2) return kNaN;
    double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0 || syy <= 0) return kNaN;
    return sxy / std::sqrt(sxx * syy);
}

double quantile(std::vector<double> xs, double q) {
    if (q < 0 || q > 1) throw std::invalid_argument("quantile: q outside [0,1]");
    xs = finite_only(xs);
    if (xs.empty()) return kNaN;
    std::sort(xs.begin(), xs.end());
    double h = q * static_cast<double>(xs.size() - 1);
    size_t lo = static_cast<size_t>(h);
    if (lo + 1 >= xs.size()) return xs.back();
    double frac = h - static_cast<double>(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

namespace {
// P(a, x) by the power series around x = 0; converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the modified Lentz continued fraction; converges fast for x >= a + 1.
double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}
}  // namespace

double lower_gamma_regularized(double a, double x) {
    if (a <= 0) throw std::invalid_argument("gamma: a must be positive");
    if (x < 0) throw std::invalid_argument("gamma: x must be nonnegative");
    if (x == 0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double upper_gamma_regularized(double a, double x) {
    if (a <= 0) throw std::invalid_argument("gamma: a must be positive");
    if (x < 0) throw std::invalid_argument("gamma: x must be nonnegative");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, double df) {
    if (df <= 0) throw std::invalid_argument("chi2_sf: df must be positive");
    if (x <= 0) return 1.0;
    return upper_gamma_regularized(df / 2.0, x / 2.0);
}

}  // namespace liq::stats
