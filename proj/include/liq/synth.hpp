#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liq/binning.hpp"
#include "liq/ingest.hpp"
#include "liq/linmodels.hpp"
#include "liq/market.hpp"
#include "liq/stationarize.hpp"
#include "liq/types.hpp"

namespace liq {

// Synthetic panels begin on this date (2018-01-01) and use consecutive
// calendar days.
inline constexpr Date kSynthFirstDay = 17532;

// Ground truth for the generators: a seasonal shape per variable and a VAR
// process for the deseasonalized logs.
struct SynthSpec {
    size_t n_days = 300;
    MarketConfig market = MarketConfig::preset("US");
    double tick_size = 0.01;
    uint64_t seed = 0;
    std::string stock_id = "SYNTH";

    // Per-slot positive multipliers, one vector per variable, each of length
    // bins_per_day (a constant level is the common case).
    std::array<std::vector<double>, kNumVars> profile;

    // coef[target][source][i] multiplies source's value at lag i+1 in the
    // target's equation.
    std::array<std::array<std::vector<double>, kNumVars>, kNumVars> coef;

    Eigen::Matrix4d innovation_cov = 0.25 * Eigen::Matrix4d::Identity();

    int max_lag() const;
    // Throws ConfigError unless the VAR is stable (companion spectral radius
    // < 1, reported on failure), the covariance is symmetric positive
    // semi-definite, and profiles are positive with the right length.
    void validate() const;
};

SynthSpec parse_synth_spec(std::istream& in, std::string name = "synth spec");
void write_synth_spec(std::ostream& out, const SynthSpec& spec);

// Stationary VAR path for the four deseasonalized log-variables, one value
// per (day, slot); a burn-in of at least 10x the maximum lag is discarded.
// Pure function of the spec (seeded generator).
SeriesSet simulate_var(const SynthSpec& spec);

// Panel with x(day, slot) = profile(slot) * exp(y(day, slot)). OHLC prices
// are synthesized so that the Garman-Klass estimate reproduces the volatility
// value exactly (open = close, high/low symmetric around it).
BinPanel synthesize_panel(const SynthSpec& spec);

// Geometric Brownian price path with `trades_per_bin` trades in every bin:
// trades_per_bin - 2 at sorted uniform times plus two carrying the bin's
// running maximum and minimum (exact Brownian-bridge extremes between sampled
// points), so binning's high/low match the continuous path over the span of
// the bin's trades. Each trade's prevailing quote straddles its price at the
// fixed spread. trades_per_bin must be at least 4.
std::vector<EnrichedTrade> simulate_gbm_ticks(double sigma2_per_bin, int trades_per_bin,
                                              size_t n_days, const MarketConfig& market,
                                              uint64_t seed, double start_price = 100.0,
                                              double quote_spread = 0.02,
                                              Date first_day = kSynthFirstDay);

}  // namespace liq
