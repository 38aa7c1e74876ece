#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "liq/binning.hpp"
#include "liq/types.hpp"

namespace liq {

// Intraday seasonal shape of one variable: per-slot mean of log-values, plus
// per-slot quantile curves of the variable normalized by its own daily mean
// (so a flat day sits at 1).
struct SeasonalProfile {
    Var variable = Var::Volatility;
    std::vector<double> mean_log;  // slot -> mean of log x over available days
    std::vector<double> median;    // slot -> quantiles of x / daily mean
    std::vector<double> q25;
    std::vector<double> q75;
    size_t n_days = 0;

    int n_slots() const { return static_cast<int>(mean_log.size()); }
};

// One variable's deseasonalized series over a panel, ordered by (day, slot).
// Missing bins carry NaN.
struct PanelSeries {
    Var variable = Var::Volatility;
    std::vector<Date> days;                  // ascending
    std::vector<std::vector<double>> values; // [day index][slot]

    int n_slots() const { return days.empty() ? 0 : static_cast<int>(values.front().size()); }
    size_t n_days() const { return days.size(); }
};

// Per-slot mean of log x over available days, restricted to day indices
// [day_begin, day_end) — the full panel by default. Requires x > 0 wherever
// present (throws DomainError) and at least one available day per slot
// (throws DomainError naming the slot).
SeasonalProfile seasonal_profile(const BinPanel& panel, Var variable, size_t day_begin = 0,
                                 size_t day_end = static_cast<size_t>(-1));

// y(d, slot) = log x(d, slot) - mean_log(slot); missing propagates.
PanelSeries deseasonalize(const BinPanel& panel, Var variable, const SeasonalProfile& profile);

// x(d, slot) = exp(y(d, slot) + mean_log(slot)): the exact inverse.
std::vector<std::vector<double>> reseasonalize(const PanelSeries& series,
                                               const SeasonalProfile& profile);

inline constexpr std::string_view kProfileHeader = "slot,mean_log,median,q25,q75";
inline constexpr std::string_view kSeriesHeader = "date,slot,value,missing";

void write_profile_csv(std::ostream& out, const SeasonalProfile& profile);
SeasonalProfile read_profile_csv(std::istream& in, Var variable, std::string name = "profile");

void write_series_csv(std::ostream& out, const PanelSeries& series);
PanelSeries read_series_csv(std::istream& in, Var variable, std::string name = "series");

}  // namespace liq
