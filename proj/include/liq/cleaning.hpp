#pragma once

#include <iosfwd>
#include <vector>

#include "liq/binning.hpp"
#include "liq/types.hpp"

namespace liq {

struct RemovedDay {
    Date day;
    int n_available;  // non-empty bins
    int n_slots;
    double ratio() const { return static_cast<double>(n_available) / n_slots; }
};

struct DaySubstitutions {
    Date day;
    int n_substituted = 0;  // volatility values <= epsilon replaced
    int n_unresolved = 0;   // no qualifying value found; marked missing
};

struct CleaningReport {
    std::vector<RemovedDay> removed_days;
    std::vector<DaySubstitutions> substitutions;  // only days with activity
};

// Drops every day whose fraction of non-empty bins falls below `threshold`
// (strictly below: a day exactly at the threshold is retained). Also drops any
// day listed in `excluded_days` (explicit half-day calendar), recording it with
// its availability ratio.
BinPanel filter_incomplete_days(const BinPanel& panel, double threshold = 0.8,
                                const std::vector<Date>& excluded_days = {},
                                CleaningReport* report = nullptr);

// Replaces every volatility value <= epsilon with the smallest value above
// epsilon found in the same day, falling back to the previous retained day
// (whose values may themselves be substitutions — days are processed in
// order). A bin with no qualifying value in either day gets missing
// volatility; other variables are never touched.
BinPanel substitute_zero_volatility(const BinPanel& panel, double epsilon = 1e-6,
                                    CleaningReport* report = nullptr);

// Both rules in order: filter days, then substitute.
BinPanel clean_panel(const BinPanel& panel, double threshold = 0.8, double epsilon = 1e-6,
                     const std::vector<Date>& excluded_days = {}, CleaningReport* report = nullptr);

// Line-delimited JSON records: one per removed day, one per day with
// substitution activity.
void write_cleaning_report(std::ostream& out, const CleaningReport& report);

}  // namespace liq
