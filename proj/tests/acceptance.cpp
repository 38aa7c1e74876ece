// End-to-end acceptance checks. Each check prints exactly one PASS/FAIL line
// with its key measurements; the process exit code is the number of failures.
//
// Usage: liq_acceptance <path-to-liqbench> [check numbers...]
//
// The checks pin the statistical and formatting contracts of the library and
// CLI against constructions with known ground truth: estimator bias bounds,
// exact algebraic identities, Monte Carlo selection rates with fixed seeds,
// analytically derived R-squared gaps, a brute-force cleaning reference, the
// documented report layout, and byte-level determinism of every pipeline
// stage.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "liq/binning.hpp"
#include "liq/causality.hpp"
#include "liq/cleaning.hpp"
#include "liq/errors.hpp"
#include "liq/linmodels.hpp"
#include "liq/market.hpp"
#include "liq/report.hpp"
#include "liq/selection.hpp"
#include "liq/stationarize.hpp"
#include "liq/synth.hpp"
#include "liq/types.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string details;
};

struct Ctx {
    std::string liqbench;
    fs::path scratch;

    fs::path dir(const std::string& name) const {
        fs::path d = scratch / name;
        fs::create_directories(d);
        return d;
    }

    int run(const std::string& args) const {
        std::string cmd = liqbench + " " + args + " >" + (scratch / "cli.out").string() +
                          " 2>" + (scratch / "cli.err").string();
        int rc = std::system(cmd.c_str());
        return rc < 0 ? rc : WEXITSTATUS(rc);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double vec_mean(const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double vec_popstd(const std::vector<double>& xs) {
    double m = vec_mean(xs);
    double s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

liq::MarketConfig custom_market(int slots, int open_hour = 9) {
    liq::MarketConfig m;
    m.zone = "custom";
    m.open_ns = open_hour * 60 * liq::kNsPerMin;
    m.bin_length_ns = 5 * liq::kNsPerMin;
    m.close_ns = m.open_ns + slots * m.bin_length_ns;
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// 1. Mean of the range-based variance estimator on a simulated price path
//    with known per-bin variance:  within 3% of truth, under 60 seconds.
// ---------------------------------------------------------------------------

Outcome check_volatility_unbiasedness(const Ctx&) {
    auto t0 = Clock::now();
    const double truth = 1e-4;
    liq::MarketConfig us = liq::MarketConfig::preset("US");
    double sum = 0;
    size_t count = 0;
    const size_t days_per_chunk = 100;
    const int n_chunks = 13;  // 13 x 100 x 78 = 101,400 bins
    for (int c = 0; c < n_chunks; ++c) {
        auto ticks = liq::simulate_gbm_ticks(truth, 100, days_per_chunk, us,
                                             1000 + static_cast<uint64_t>(c));
        liq::BinPanel panel = liq::build_bins(ticks, us, 0.01);
        for (const auto& row : panel.grid)
            for (const liq::Bin& b : row)
                if (!b.empty() && std::isfinite(b.volatility)) {
                    sum += b.volatility;
                    ++count;
                }
    }
    double mean = sum / static_cast<double>(count);
    double rel = mean / truth - 1.0;
    double secs = seconds_since(t0);
    bool pass = count >= 100000 && std::fabs(rel) <= 0.03 && secs < 60.0;
    return {pass, fmt("mean %.6e vs %.0e (%+.2f%%), %zu bins, %.1fs (limit 60s)", mean, truth,
                      rel * 100.0, count, secs)};
}

// ---------------------------------------------------------------------------
// 2. Deseasonalization identities on randomized panels: per-slot means of the
//    deseasonalized values vanish, reseasonalization inverts exactly, and
//    scaling a raw variable cannot move any deseasonalized value.
// ---------------------------------------------------------------------------

liq::BinPanel lognormal_panel(std::mt19937_64& rng, size_t days, const liq::MarketConfig& market,
                              double nan_rate, double scale) {
    std::normal_distribution<double> g(0.0, 1.1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    liq::BinPanel p;
    p.stock_id = "DES";
    p.market = market;
    p.tick_size = 0.01;
    int slots = market.bins_per_day();
    for (size_t d = 0; d < days; ++d) {
        p.days.push_back(static_cast<liq::Date>(17532 + d));
        std::vector<liq::Bin> row(static_cast<size_t>(slots));
        for (int s = 0; s < slots; ++s) {
            liq::Bin& b = row[static_cast<size_t>(s)];
            b.day = p.days.back();
            b.slot = s;
            if (u(rng) < nan_rate) continue;
            b.n_trades = 1;
            b.open = b.high = b.low = b.close = 100.0;
            b.volatility = std::exp(g(rng)) * 1e-4 * scale;
            b.spread = std::exp(g(rng)) * 0.05 * scale;
            b.spread_ticks = b.spread / p.tick_size;
            b.book_size = std::exp(g(rng)) * 400 * scale;
            b.traded_value = std::exp(g(rng)) * 2e5 * scale;
        }
        p.grid.push_back(std::move(row));
    }
    return p;
}

Outcome check_deseasonalization(const Ctx&) {
    std::mt19937_64 rng(271828);
    double worst_mean = 0, worst_round = 0, worst_scale = 0;
    const double ks[] = {7.25, 1e-6, 3.7e5};
    std::vector<liq::BinPanel> panels;
    panels.push_back(lognormal_panel(rng, 40, custom_market(7), 0.0, 1.0));
    panels.push_back(lognormal_panel(rng, 90, custom_market(13), 0.12, 1e-5));
    panels.push_back(lognormal_panel(rng, 25, custom_market(4), 0.2, 1e6));
    panels.push_back(lognormal_panel(rng, 30, liq::MarketConfig::preset("Japan"), 0.05, 1.0));
    for (const auto& panel : panels) {
        for (liq::Var v : liq::kAllVars) {
            auto prof = liq::seasonal_profile(panel, v);
            auto des = liq::deseasonalize(panel, v, prof);
            int slots = panel.slots_per_day();
            for (int s = 0; s < slots; ++s) {
                double sum = 0;
                size_t n = 0;
                for (size_t d = 0; d < panel.n_days(); ++d)
                    if (std::isfinite(des.values[d][static_cast<size_t>(s)])) {
                        sum += des.values[d][static_cast<size_t>(s)];
                        ++n;
                    }
                if (n) worst_mean = std::max(worst_mean, std::fabs(sum / static_cast<double>(n)));
            }
            auto back = liq::reseasonalize(des, prof);
            for (size_t d = 0; d < panel.n_days(); ++d)
                for (int s = 0; s < slots; ++s) {
                    double raw = panel.value(d, s, v);
                    if (!std::isfinite(raw)) continue;
                    worst_round = std::max(
                        worst_round, std::fabs(back[d][static_cast<size_t>(s)] - raw) / raw);
                }
            for (double k : ks) {
                liq::BinPanel scaled = panel;
                for (size_t d = 0; d < panel.n_days(); ++d)
                    for (int s = 0; s < slots; ++s) {
                        double raw = panel.value(d, s, v);
                        if (std::isfinite(raw)) scaled.set_value(d, s, v, raw * k);
                    }
                auto prof2 = liq::seasonal_profile(scaled, v);
                auto des2 = liq::deseasonalize(scaled, v, prof2);
                for (size_t d = 0; d < panel.n_days(); ++d)
                    for (int s = 0; s < slots; ++s) {
                        double a = des.values[d][static_cast<size_t>(s)];
                        double b = des2.values[d][static_cast<size_t>(s)];
                        if (std::isfinite(a))
                            worst_scale = std::max(worst_scale, std::fabs(a - b));
                    }
            }
        }
    }
    bool pass = worst_mean < 1e-10 && worst_round <= 1e-12 && worst_scale <= 1e-12;
    return {pass, fmt("worst slot mean %.2e (<1e-10), round-trip rel %.2e (<=1e-12), "
                      "scale drift %.2e (<=1e-12)",
                      worst_mean, worst_round, worst_scale)};
}

// ---------------------------------------------------------------------------
// 3. A planted third-order autoregression on a 1,500-day panel (~10^5 bins):
//    full-sample coefficients land within ±0.02 of (0.4, 0.2, 0.1), and the
//    full search (lags 1..40, all 16 subsets, 20 batches) picks the planted
//    subset and lag in at least 90% of 50 seeded runs, under 5 minutes per
//    seed.
// ---------------------------------------------------------------------------

Outcome check_ar_recovery(const Ctx&) {
    liq::SynthSpec spec;
    spec.market = liq::MarketConfig::preset("US");
    spec.n_days = 1500;
    spec.coef[0][0] = {0.4, 0.2, 0.1};
    spec.validate();
    auto scheme = liq::make_batches(spec.n_days, 20, 150, 150);
    auto layout = liq::layout_for_market(spec.market);
    const liq::VarSet target_only = liq::set_with(0, liq::Var::Volatility);
    int n_selected = 0, n_coef_ok = 0;
    double max_grid_secs = 0;
    const int n_seeds = 50;
    for (int s = 1; s <= n_seeds; ++s) {
        spec.seed = static_cast<uint64_t>(s);
        auto panel = liq::synthesize_panel(spec);
        auto t0 = Clock::now();
        auto res = liq::grid_search(panel, liq::Var::Volatility, 40, liq::SubsetPolicy::All,
                                    scheme, liq::ProfileMode::TrainOnly, layout, 1);
        max_grid_secs = std::max(max_grid_secs, seconds_since(t0));
        if (res.best && res.best->subset == target_only && res.best->lag == 3) ++n_selected;

        liq::SeriesSet series;
        auto prof = liq::seasonal_profile(panel, liq::Var::Volatility);
        series[0] = liq::deseasonalize(panel, liq::Var::Volatility, prof);
        auto model = liq::fit_linear(series, {liq::Var::Volatility, target_only, 3}, 0,
                                     panel.n_days(), layout);
        if (std::fabs(model.coef[0] - 0.4) <= 0.02 && std::fabs(model.coef[1] - 0.2) <= 0.02 &&
            std::fabs(model.coef[2] - 0.1) <= 0.02)
            ++n_coef_ok;
    }
    bool pass = n_selected >= 45 && n_coef_ok == n_seeds && max_grid_secs < 300.0;
    return {pass, fmt("selected (target-only, lag 3) in %d/%d seeds (need 45), coefficients in "
                      "band %d/%d, slowest grid %.1fs (limit 300s), 117000 bins",
                      n_selected, n_seeds, n_coef_ok, n_seeds, max_grid_secs)};
}

// ---------------------------------------------------------------------------
// 4. Out-of-sample R^2 calibration: a first-order autoregression with
//    coefficient 0.6 and innovation variance 0.64 has predictable variance
//    share 0.36; the held-out measurement over 5x10^4 validation points must
//    land within ±0.02.
// ---------------------------------------------------------------------------

Outcome check_oos_calibration(const Ctx&) {
    liq::SynthSpec spec;
    spec.market = custom_market(12);
    spec.n_days = 10000;
    spec.seed = 99;
    spec.coef[0][0] = {0.6};
    spec.innovation_cov = Eigen::Matrix4d::Identity() * 0.64;
    spec.validate();
    auto panel = liq::synthesize_panel(spec);
    liq::SeriesSet series;
    auto prof = liq::seasonal_profile(panel, liq::Var::Volatility);
    series[0] = liq::deseasonalize(panel, liq::Var::Volatility, prof);
    auto model = liq::fit_linear(series, {liq::Var::Volatility,
                                          liq::set_with(0, liq::Var::Volatility), 1},
                                 0, 5000);
    double r2 = liq::r2_out_of_sample(model, series, 5000, 10000);
    size_t valid_points = 5000 * 11;  // 12 slots leave 11 lag-1 rows per day
    bool pass = std::fabs(r2 - 0.36) <= 0.02 && valid_points >= 50000;
    return {pass, fmt("out-of-sample R^2 %.4f vs 0.36 (tolerance 0.02), coefficient %.4f, "
                      "%zu validation points",
                      r2, model.coef[0], valid_points)};
}

// ---------------------------------------------------------------------------
// 5. Causality test size and power: on independent series the rejection rate
//    at alpha=0.001 stays within the binomial bound (<=0.5% over 2,000 trials
//    of n=5,000) and the p-values are KS-close to uniform (<0.05); when the
//    effect truly loads 0.5 on the cause's first lag, rejection is >=99%.
// ---------------------------------------------------------------------------

Outcome check_granger_size_power(const Ctx&) {
    const int n_trials = 2000;
    const size_t days = 50;
    const int slots = 100;  // 5,000 observations per trial
    auto make_series = [&](std::mt19937_64& rng, bool coupled) {
        std::normal_distribution<double> g(0.0, 1.0);
        liq::SeriesSet set;
        auto& cause = set[static_cast<size_t>(static_cast<int>(liq::Var::Volatility))];
        auto& effect = set[static_cast<size_t>(static_cast<int>(liq::Var::Spread))];
        cause.variable = liq::Var::Volatility;
        effect.variable = liq::Var::Spread;
        double prev_cause = g(rng);
        for (size_t d = 0; d < days; ++d) {
            cause.days.push_back(static_cast<liq::Date>(d));
            effect.days.push_back(static_cast<liq::Date>(d));
            std::vector<double> crow(static_cast<size_t>(slots)), erow(crow);
            for (int s = 0; s < slots; ++s) {
                double c = g(rng);
                double e = coupled ? 0.5 * prev_cause + g(rng) : g(rng);
                crow[static_cast<size_t>(s)] = c;
                erow[static_cast<size_t>(s)] = e;
                prev_cause = c;
            }
            cause.values.push_back(std::move(crow));
            effect.values.push_back(std::move(erow));
        }
        return liq::flatten_series(set, {});
    };

    std::vector<double> pvals;
    pvals.reserve(n_trials);
    int null_rejects = 0;
    for (int t = 0; t < n_trials; ++t) {
        std::mt19937_64 rng(90000 + static_cast<uint64_t>(t));
        auto flat = make_series(rng, false);
        auto r = liq::granger_test(flat, liq::Var::Spread, liq::Var::Volatility, 1, 0.001);
        pvals.push_back(r.p_value);
        if (r.reject) ++null_rejects;
    }
    std::sort(pvals.begin(), pvals.end());
    double ks = 0;
    for (size_t i = 0; i < pvals.size(); ++i) {
        double n = static_cast<double>(pvals.size());
        double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
        ks = std::max(ks, std::max(pvals[i] - lo, hi - pvals[i]));
    }
    int power_rejects = 0;
    for (int t = 0; t < n_trials; ++t) {
        std::mt19937_64 rng(95000 + static_cast<uint64_t>(t));
        auto flat = make_series(rng, true);
        auto r = liq::granger_test(flat, liq::Var::Spread, liq::Var::Volatility, 1, 0.001);
        if (r.reject) ++power_rejects;
    }
    double null_rate = static_cast<double>(null_rejects) / n_trials;
    double power_rate = static_cast<double>(power_rejects) / n_trials;
    bool pass = null_rate <= 0.005 && ks < 0.05 && power_rate >= 0.99;
    return {pass, fmt("null rejection %.3f%% (<=0.5%%), KS distance %.4f (<0.05), power "
                      "%.1f%% (>=99%%) over %d trials of n=5000",
                      null_rate * 100.0, ks, power_rate * 100.0, n_trials)};
}

// ---------------------------------------------------------------------------
// 6. Cross-variable advantage: when the target loads 0.8 on another
//    variable's first lag (that variable itself AR(1) with coefficient 0.5),
//    the best cross-variable mean R^2 must beat the best own-lags-only mean
//    R^2 by the analytically derived gap ±0.03, with a best lag no deeper
//    than the own-lags winner's.
// ---------------------------------------------------------------------------

Outcome check_var_beats_ar(const Ctx&) {
    const double phi = 0.5, load = 0.8, sig_eps2 = 0.36, sig_eta2 = 1.0;
    // Analytic values. Driver x: AR(1), var gx0. Target y_t = load x_{t-1} + eps_t.
    double gx0 = sig_eta2 / (1 - phi * phi);
    double gy0 = load * load * gx0 + sig_eps2;
    double r2_var = load * load * gx0 / gy0;
    // Own-past-only prediction: u_t = y_t - phi y_{t-1} is first-order moving
    // average; its invertible-root factorization gives the one-step innovation
    // variance of y's own-history predictor.
    double gu0 = load * load * sig_eta2 + sig_eps2 * (1 + phi * phi);
    double gu1 = -phi * sig_eps2;
    double r = gu1 / gu0;
    double theta = (1 - std::sqrt(1 - 4 * r * r)) / (2 * r);
    double innov = gu0 / (1 + theta * theta);
    double r2_ar = 1 - innov / gy0;
    double want_gap = r2_var - r2_ar;

    liq::SynthSpec spec;
    spec.market = liq::MarketConfig::preset("US");
    spec.n_days = 1500;
    spec.seed = 20;
    spec.coef[0][0] = {phi};   // volatility drives itself
    spec.coef[1][0] = {load};  // spread loads on volatility's first lag
    spec.innovation_cov = Eigen::Matrix4d::Identity();
    spec.innovation_cov(1, 1) = sig_eps2;
    spec.validate();
    auto panel = liq::synthesize_panel(spec);
    auto scheme = liq::make_batches(spec.n_days, 20, 150, 150);
    auto res = liq::grid_search(panel, liq::Var::Spread, 40, liq::SubsetPolicy::All, scheme,
                                liq::ProfileMode::TrainOnly,
                                liq::layout_for_market(spec.market), 1);
    const liq::VarSet ar_subset = liq::set_with(0, liq::Var::Spread);
    double best_ar = -1e18, best_var = -1e18;
    int ar_lag = -1, var_lag = -1;
    for (const auto& row : res.table) {
        if (!std::isfinite(row.mean_r2) || row.subset == 0) continue;
        if (row.subset == ar_subset) {
            if (row.mean_r2 > best_ar) {
                best_ar = row.mean_r2;
                ar_lag = row.lag;
            }
        } else if (row.mean_r2 > best_var) {
            best_var = row.mean_r2;
            var_lag = row.lag;
        }
    }
    double gap = best_var - best_ar;
    bool pass = std::fabs(gap - want_gap) <= 0.03 && var_lag <= ar_lag && var_lag >= 1;
    return {pass, fmt("measured gap %.4f vs analytic %.4f (tolerance 0.03); cross-variable lag "
                      "%d <= own-lags lag %d; R^2 %.4f vs %.4f",
                      gap, want_gap, var_lag, ar_lag, best_var, best_ar)};
}

// ---------------------------------------------------------------------------
// 7. Cleaning rules against a brute-force reference on 100 randomized panels:
//    the 80% day filter and the 1e-6 volatility substitution must match the
//    reference output and audit trail exactly.
// ---------------------------------------------------------------------------

struct MirrorClean {
    liq::BinPanel panel;
    std::vector<std::array<long long, 3>> removed;  // day, available, slots
    std::vector<std::array<long long, 3>> subs;     // day, substituted, unresolved
};

MirrorClean mirror_clean(const liq::BinPanel& input, double threshold, double epsilon,
                         const std::vector<liq::Date>& excluded) {
    MirrorClean out;
    out.panel.stock_id = input.stock_id;
    out.panel.market = input.market;
    out.panel.tick_size = input.tick_size;
    const int slots = input.slots_per_day();
    for (size_t d = 0; d < input.n_days(); ++d) {
        int avail = 0;
        for (int s = 0; s < slots; ++s)
            if (input.grid[d][static_cast<size_t>(s)].n_trades != 0) ++avail;
        bool drop = std::count(excluded.begin(), excluded.end(), input.days[d]) > 0 ||
                    static_cast<double>(avail) / slots < threshold;
        if (drop) {
            out.removed.push_back({input.days[d], avail, slots});
        } else {
            out.panel.days.push_back(input.days[d]);
            out.panel.grid.push_back(input.grid[d]);
        }
    }
    double prev_min = std::numeric_limits<double>::quiet_NaN();
    for (size_t d = 0; d < out.panel.n_days(); ++d) {
        auto& row = out.panel.grid[d];
        double day_min = std::numeric_limits<double>::quiet_NaN();
        for (const liq::Bin& b : row)
            if (std::isfinite(b.volatility) && b.volatility > epsilon &&
                !(day_min <= b.volatility))
                day_min = b.volatility;
        long long n_sub = 0, n_unres = 0;
        for (liq::Bin& b : row) {
            if (b.n_trades == 0 || !std::isfinite(b.volatility) || b.volatility > epsilon)
                continue;
            double repl = std::isfinite(day_min) ? day_min : prev_min;
            if (std::isfinite(repl)) {
                b.volatility = repl;
                ++n_sub;
            } else {
                b.volatility = std::numeric_limits<double>::quiet_NaN();
                ++n_unres;
            }
        }
        double final_min = std::numeric_limits<double>::quiet_NaN();
        for (const liq::Bin& b : row)
            if (std::isfinite(b.volatility) && b.volatility > epsilon &&
                !(final_min <= b.volatility))
                final_min = b.volatility;
        prev_min = final_min;
        if (n_sub || n_unres) out.subs.push_back({out.panel.days[d], n_sub, n_unres});
    }
    return out;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same_bin(const liq::Bin& a, const liq::Bin& b) {
    return a.day == b.day && a.slot == b.slot && a.n_trades == b.n_trades &&
           same_double(a.open, b.open) && same_double(a.high, b.high) &&
           same_double(a.low, b.low) && same_double(a.close, b.close) &&
           same_double(a.traded_value, b.traded_value) && same_double(a.spread, b.spread) &&
           same_double(a.spread_ticks, b.spread_ticks) &&
           same_double(a.book_size, b.book_size) && same_double(a.volatility, b.volatility);
}

Outcome check_cleaning_brute_force(const Ctx&) {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    int n_panels = 100, n_matched = 0;
    std::string first_fail;
    for (int p = 0; p < n_panels; ++p) {
        int slots = 3 + static_cast<int>(u(rng) * 10);
        if (p % 2 == 0) slots = (p % 4 == 0) ? 5 : 10;  // exact-threshold geometries
        size_t days = 5 + static_cast<size_t>(u(rng) * 45);
        double p_empty = u(rng) * 0.35;
        liq::BinPanel panel;
        panel.stock_id = "CLN" + std::to_string(p);
        panel.market = custom_market(slots);
        panel.tick_size = 0.01;
        for (size_t d = 0; d < days; ++d) {
            panel.days.push_back(static_cast<liq::Date>(18000 + d * (1 + d % 3)));
            std::vector<liq::Bin> row(static_cast<size_t>(slots));
            int forced_nonempty = -1;
            if (d == 1) forced_nonempty = (slots * 4 + 4) / 5;      // exactly at 80% when 5|slots
            if (d == 2) forced_nonempty = (slots * 4 + 4) / 5 - 1;  // strictly below
            for (int s = 0; s < slots; ++s) {
                liq::Bin& b = row[static_cast<size_t>(s)];
                b.day = panel.days.back();
                b.slot = s;
                bool empty = forced_nonempty >= 0 ? s >= forced_nonempty : u(rng) < p_empty;
                if (empty) continue;
                b.n_trades = 1 + static_cast<int64_t>(u(rng) * 5);
                b.open = b.high = b.low = b.close = 100.0;
                double roll = u(rng);
                if (roll < 0.15) b.volatility = 0.0;
                else if (roll < 0.23) b.volatility = 1e-7;
                else if (roll < 0.28) b.volatility = 1e-6;  // boundary: substituted
                else if (roll < 0.33) b.volatility = 2e-6;  // just above: kept
                else if (roll < 0.37) b.volatility = std::numeric_limits<double>::quiet_NaN();
                else if (roll < 0.40) b.volatility = -1e-8;
                else b.volatility = std::exp(g(rng)) * 1e-4;
                b.spread = std::exp(g(rng)) * 0.05;
                b.spread_ticks = b.spread / panel.tick_size;
                b.book_size = std::exp(g(rng)) * 300;
                b.traded_value = std::exp(g(rng)) * 1e5;
            }
            panel.grid.push_back(std::move(row));
        }
        std::vector<liq::Date> excluded;
        if (p % 3 == 0 && days > 4) excluded.push_back(panel.days[days / 2]);
        if (p % 9 == 0) excluded.push_back(static_cast<liq::Date>(99999));  // not present

        liq::CleaningReport report;
        liq::BinPanel cleaned = liq::clean_panel(panel, 0.8, 1e-6, excluded, &report);
        MirrorClean ref = mirror_clean(panel, 0.8, 1e-6, excluded);

        bool ok = cleaned.n_days() == ref.panel.n_days() && cleaned.days == ref.panel.days &&
                  report.removed_days.size() == ref.removed.size() &&
                  report.substitutions.size() == ref.subs.size();
        if (ok)
            for (size_t d = 0; d < cleaned.n_days(); ++d)
                for (int s = 0; s < slots; ++s)
                    ok = ok && same_bin(cleaned.grid[d][static_cast<size_t>(s)],
                                        ref.panel.grid[d][static_cast<size_t>(s)]);
        if (ok)
            for (size_t i = 0; i < ref.removed.size(); ++i)
                ok = ok && report.removed_days[i].day == ref.removed[i][0] &&
                     report.removed_days[i].n_available == ref.removed[i][1] &&
                     report.removed_days[i].n_slots == ref.removed[i][2];
        if (ok)
            for (size_t i = 0; i < ref.subs.size(); ++i)
                ok = ok && report.substitutions[i].day == ref.subs[i][0] &&
                     report.substitutions[i].n_substituted == ref.subs[i][1] &&
                     report.substitutions[i].n_unresolved == ref.subs[i][2];
        if (ok) ++n_matched;
        else if (first_fail.empty()) first_fail = fmt(" (first mismatch: panel %d)", p);
    }
    return {n_matched == n_panels,
            fmt("%d/%d randomized panels match the reference exactly%s", n_matched, n_panels,
                first_fail.c_str())};
}

// ---------------------------------------------------------------------------
// 8. Report layout on a 12-stock, 3-zone cohort: documented headers, zone
//    aggregates equal to independently computed means and population
//    deviations, and the "mean (std)" cell convention.
// ---------------------------------------------------------------------------

Outcome check_report_shapes(const Ctx& ctx) {
    fs::path dir = ctx.dir("report_shapes");
    fs::path rec_dir = dir / "records";
    fs::create_directories(rec_dir);

    const std::array<std::string, 3> zones = {"AMER", "EMEA", "APAC"};
    double ar_r2[12][4], var_r2[12][4];
    int ar_lag[12][4], var_lag[12][4];
    const double amer_vol[4] = {0.403, 0.403, 0.493, 0.493};  // mean .448, pop std .045
    for (int i = 0; i < 12; ++i) {
        int z = i / 4, j = i % 4;
        for (int v = 0; v < 4; ++v) {
            ar_r2[i][v] = (z == 0 && v == 0) ? amer_vol[j]
                                             : 0.20 + 0.03 * z + 0.02 * v + 0.015 * j;
            var_r2[i][v] = ar_r2[i][v] + 0.05 + 0.005 * j;
            ar_lag[i][v] = 20 + 2 * z + v + j;
            var_lag[i][v] = 8 + z + (v + j) % 3;
        }
    }
    std::ostringstream meta;
    meta << liq::kMetadataHeader << "\n";
    for (int i = 0; i < 12; ++i) {
        liq::StockRecord rec;
        rec.stock_id = fmt("S%02d", i + 1);
        rec.zone = zones[static_cast<size_t>(i / 4)];
        double ticks_avg[4] = {1.1, 1.65, 2.4, 1.2};
        rec.descriptive.avg_spread_bp = 5.0 + i;
        rec.descriptive.avg_spread_ticks = ticks_avg[i % 4];
        rec.descriptive.avg_book_size = 300.0 + 10 * i;
        rec.descriptive.avg_turnover = 1e5 * (1 + i);
        for (liq::Var v : liq::kAllVars) {
            int vi = static_cast<int>(v);
            liq::SpecScore ar;
            ar.subset = liq::set_with(0, v);
            ar.lag = ar_lag[i][vi];
            ar.mean_r2 = ar_r2[i][vi];
            ar.std_r2 = 0.01;
            ar.n_batches_used = 20;
            liq::SpecScore vr = ar;
            vr.subset = liq::set_with(ar.subset, v == liq::Var::Volatility ? liq::Var::Spread
                                                                           : liq::Var::Volatility);
            vr.lag = var_lag[i][vi];
            vr.mean_r2 = var_r2[i][vi];
            rec.best_ar[static_cast<size_t>(vi)] = ar;
            rec.best_var[static_cast<size_t>(vi)] = vr;
            rec.ar_coef[static_cast<size_t>(vi)] = {0.5 - 0.01 * (i % 4), 0.25, 0.12};
        }
        std::ofstream out(rec_dir / (rec.stock_id + ".json"));
        liq::write_stock_record(out, rec);
        meta << rec.stock_id << "," << rec.zone << "," << 1e9 * (i + 1) << ","
             << (i == 6 ? std::string() : std::string("0.5")) << "\n";
    }
    spit(dir / "metadata.csv", meta.str());

    liq::SynthSpec bins_spec;
    bins_spec.market = custom_market(6);
    bins_spec.n_days = 30;
    bins_spec.seed = 5;
    bins_spec.validate();
    {
        std::ofstream out(dir / "bins.csv");
        liq::write_bins_csv(out, liq::synthesize_panel(bins_spec));
    }

    fs::path out_dir = dir / "out";
    int rc = ctx.run(fmt("report --records-dir %s --metadata %s --bins %s --out-dir %s",
                         rec_dir.c_str(), (dir / "metadata.csv").c_str(),
                         (dir / "bins.csv").c_str(), out_dir.c_str()));
    if (rc != 0) return {false, fmt("report run failed with exit code %d", rc)};

    std::vector<std::string> problems;
    auto expect_header = [&](const std::string& file, const std::string& header,
                             int n_lines) -> std::vector<std::string> {
        auto ls = lines_of(slurp(out_dir / file));
        if (ls.empty() || ls[0] != header)
            problems.push_back(file + ": header is '" + (ls.empty() ? "" : ls[0]) + "'");
        else if (n_lines > 0 && static_cast<int>(ls.size()) != n_lines)
            problems.push_back(fmt("%s: %zu lines, expected %d", file.c_str(), ls.size(),
                                   n_lines));
        return ls;
    };
    auto t2 = expect_header("table2.csv", "zone,model,n_stocks,volatility,spread,book,turnover",
                            7);
    auto t3 = expect_header("table3.csv", "zone,model,n_stocks,volatility,spread,book,turnover",
                            7);
    expect_header("stock_summaries.csv",
                  "stock_id,zone,tick_class,avg_spread_bp,avg_spread_ticks,avg_book_size,"
                  "avg_turnover,market_cap,variable,best_ar_lag,best_ar_r2,best_var_subset,"
                  "best_var_lag,best_var_r2,lambda,first_lag_coef",
                  49);
    expect_header("scatter_spread_r2.csv", "stock_id,zone,variable,avg_spread_ticks,ar_r2,var_r2",
                  49);
    expect_header("scatter_cap_first_coef.csv", "stock_id,zone,variable,scaled_cap,first_lag_coef",
                  49);
    expect_header("scatter_cap_lambda.csv", "stock_id,zone,variable,scaled_cap,lambda", 49);
    expect_header("r2_improvement.csv", "zone,variable,stock_id,improvement", 49);
    expect_header("quantile_curves.csv", "variable,slot,median,q25,q75", 25);
    if (!fs::exists(out_dir / "report_meta.json") ||
        fs::file_size(out_dir / "report_meta.json") == 0)
        problems.push_back("report_meta.json missing or empty");

    // Zone aggregates, computed here from the same planted tables.
    std::map<std::string, std::vector<std::string>> t2_rows, t3_rows;
    for (size_t i = 1; i < t2.size(); ++i) {
        auto f = split_csv(t2[i]);
        if (f.size() == 7) t2_rows[f[0] + "|" + f[1]] = f;
    }
    for (size_t i = 1; i < t3.size(); ++i) {
        auto f = split_csv(t3[i]);
        if (f.size() == 7) t3_rows[f[0] + "|" + f[1]] = f;
    }
    for (int z = 0; z < 3; ++z) {
        for (int model = 0; model < 2; ++model) {
            std::string key = zones[static_cast<size_t>(z)] + "|" + (model ? "VAR" : "AR");
            auto it2 = t2_rows.find(key), it3 = t3_rows.find(key);
            if (it2 == t2_rows.end() || it3 == t3_rows.end()) {
                problems.push_back("missing aggregate row " + key);
                continue;
            }
            if (it2->second[2] != "4" || it3->second[2] != "4")
                problems.push_back(key + ": n_stocks is not 4");
            for (int v = 0; v < 4; ++v) {
                std::vector<double> r2s, lags;
                for (int j = 0; j < 4; ++j) {
                    int i = z * 4 + j;
                    r2s.push_back(model ? var_r2[i][v] : ar_r2[i][v]);
                    lags.push_back(model ? var_lag[i][v] : ar_lag[i][v]);
                }
                std::string want_cell = fmt("%.3f (%.3f)", vec_mean(r2s), vec_popstd(r2s));
                std::string want_lag = fmt("%.1f", vec_mean(lags));
                if (it2->second[static_cast<size_t>(3 + v)] != want_cell)
                    problems.push_back(key + " var " + std::to_string(v) + ": cell '" +
                                       it2->second[static_cast<size_t>(3 + v)] + "' != '" +
                                       want_cell + "'");
                if (it3->second[static_cast<size_t>(3 + v)] != want_lag)
                    problems.push_back(key + " var " + std::to_string(v) + ": lag '" +
                                       it3->second[static_cast<size_t>(3 + v)] + "' != '" +
                                       want_lag + "'");
            }
        }
    }
    auto amer_ar = t2_rows.find("AMER|AR");
    bool literal_ok = amer_ar != t2_rows.end() && amer_ar->second[3] == "0.448 (0.045)";
    if (!literal_ok) problems.push_back("AMER AR volatility cell is not '0.448 (0.045)'");

    if (!problems.empty())
        return {false, fmt("%zu mismatches; first: %s", problems.size(), problems[0].c_str())};
    return {true, "9 output files, documented headers, 24 aggregate cells and 24 lag cells "
                  "match hand-computed values, sample cell '0.448 (0.045)'"};
}

// ---------------------------------------------------------------------------
// 9. Determinism: the full pipeline re-run with identical inputs, flags, and
//    seed produces byte-identical files, with the thread count varied.
// ---------------------------------------------------------------------------

Outcome check_determinism(const Ctx& ctx) {
    fs::path base = ctx.dir("determinism");
    liq::SynthSpec spec;
    spec.market = liq::MarketConfig::preset("Japan");
    spec.n_days = 140;
    spec.seed = 7;
    spec.stock_id = "SYN";
    spec.coef[0][0] = {0.3};
    spec.coef[1][0] = {0.2};
    spec.coef[1][1] = {0.25};
    spec.coef[2][2] = {0.35};
    spec.coef[3][3] = {0.3};
    spec.validate();
    {
        std::ofstream out(base / "spec.json");
        liq::write_synth_spec(out, spec);
    }
    auto run_pipeline = [&](const std::string& name, int jobs) -> std::string {
        fs::path d = base / name;
        fs::create_directories(d);
        std::string j = fmt(" --jobs %d", jobs);
        std::vector<std::string> cmds = {
            fmt("synth --spec %s --out %s/bins.csv --truth %s/truth.json --seed 7",
                (base / "spec.json").c_str(), d.c_str(), d.c_str()),
            fmt("synth --gbm-out %s/ticks.csv --days 3 --trades-per-bin 12 --seed 11 "
                "--market Japan",
                d.c_str()),
            fmt("bin --ticks %s/ticks.csv --out %s/bins_gbm.csv --market Japan --stock-id GBM",
                d.c_str(), d.c_str()),
            fmt("clean --bins %s/bins.csv --out %s/cleaned.csv --report %s/cleaning.jsonl "
                "--market Japan",
                d.c_str(), d.c_str(), d.c_str()),
            fmt("profile --bins %s/cleaned.csv --out-dir %s/prof --series --market Japan",
                d.c_str(), d.c_str()),
            fmt("fit --bins %s/cleaned.csv --out-dir %s/fit --target spread --max-lag 4 "
                "--n-batches 3 --train-days 50 --valid-days 50 --zone TEST --stock-id SYN "
                "--market Japan",
                d.c_str(), d.c_str()),
            fmt("granger --bins %s/cleaned.csv --out %s/granger.csv --max-lag 3 --market Japan",
                d.c_str(), d.c_str()),
            fmt("correlations --bins %s/cleaned.csv --out %s/correlations.csv --max-lag 5 "
                "--market Japan",
                d.c_str(), d.c_str()),
            fmt("report --records %s/fit/record.json --bins %s/cleaned.csv --out-dir %s/rep",
                d.c_str(), d.c_str(), d.c_str()),
        };
        for (const auto& c : cmds) {
            int rc = ctx.run(c + j);
            if (rc != 0) return fmt("'%s%s' exited %d", c.c_str(), j.c_str(), rc);
        }
        return "";
    };
    auto snapshot = [&](const std::string& name) {
        std::map<std::string, std::string> files;
        fs::path d = base / name;
        for (const auto& e : fs::recursive_directory_iterator(d))
            if (e.is_regular_file())
                files[fs::relative(e.path(), d).string()] = slurp(e.path());
        return files;
    };
    for (auto& [name, jobs] : std::vector<std::pair<std::string, int>>{
             {"run_a", 1}, {"run_b", 1}, {"run_c", 4}}) {
        std::string err = run_pipeline(name, jobs);
        if (!err.empty()) return {false, name + ": " + err};
    }
    auto a = snapshot("run_a"), b = snapshot("run_b"), c = snapshot("run_c");
    size_t n_files = a.size();
    if (n_files < 20) return {false, fmt("only %zu output files produced", n_files)};
    auto diff = [&](const std::map<std::string, std::string>& x,
                    const std::map<std::string, std::string>& y) -> std::string {
        if (x.size() != y.size()) return fmt("file counts differ (%zu vs %zu)", x.size(),
                                             y.size());
        for (const auto& [k, v] : x) {
            auto it = y.find(k);
            if (it == y.end()) return k + " missing";
            if (it->second != v) return k + " differs";
        }
        return "";
    };
    std::string d1 = diff(a, b), d2 = diff(a, c);
    if (!d1.empty()) return {false, "rerun at same thread count: " + d1};
    if (!d2.empty()) return {false, "rerun at 4 threads: " + d2};
    return {true, fmt("%zu files byte-identical across a rerun and a 4-thread run "
                      "(all 8 pipeline stages)",
                      n_files)};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-liqbench> [check numbers...]\n", argv[0]);
        return 2;
    }
    Ctx ctx;
    ctx.liqbench = argv[1];
    char tmpl[] = "/tmp/liqacc.XXXXXX";
    if (!mkdtemp(tmpl)) {
        std::fprintf(stderr, "cannot create scratch directory\n");
        return 2;
    }
    ctx.scratch = tmpl;

    struct Check {
        int num;
        const char* title;
        Outcome (*fn)(const Ctx&);
    };
    const Check checks[] = {
        {1, "range-estimator unbiasedness", check_volatility_unbiasedness},
        {2, "deseasonalization exactness", check_deseasonalization},
        {3, "autoregression recovery", check_ar_recovery},
        {4, "out-of-sample R^2 calibration", check_oos_calibration},
        {5, "causality test size and power", check_granger_size_power},
        {6, "cross-variable model advantage", check_var_beats_ar},
        {7, "cleaning matches brute force", check_cleaning_brute_force},
        {8, "report shapes and aggregates", check_report_shapes},
        {9, "byte-identical pipeline reruns", check_determinism},
    };
    std::set<int> wanted;
    for (int i = 2; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : checks) {
        if (!wanted.empty() && !wanted.count(c.num)) continue;
        Outcome o = c.fn(ctx);
        std::printf("%s  %d. %s — %s\n", o.pass ? "PASS" : "FAIL", c.num, c.title,
                    o.details.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    fs::remove_all(ctx.scratch);
    return failures;
}
