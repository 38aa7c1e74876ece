#include "liq/cleaning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "liq/csv.hpp"

namespace liq {

BinPanel filter_incomplete_days(const BinPanel& panel, double threshold,
                                const std::vector<Date>& excluded_days,
                                CleaningReport* report) {
    BinPanel out;
    out.stock_id = panel.stock_id;
    out.market = panel.market;
    out.tick_size = panel.tick_size;
    int n_slots = panel.slots_per_day();
    for (size_t d = 0; d < panel.n_days(); ++d) {
        int available = 0;
        for (const Bin& b : panel.grid[d])
            if (!b.empty()) ++available;
        bool excluded = std::find(excluded_days.begin(), excluded_days.end(), panel.days[d]) !=
                        excluded_days.end();
        double ratio = static_cast<double>(available) / n_slots;
        if (excluded || ratio < threshold) {
            if (report) report->removed_days.push_back({panel.days[d], available, n_slots});
            continue;
        }
        out.days.push_back(panel.days[d]);
        out.grid.push_back(panel.grid[d]);
    }
    return out;
}

BinPanel substitute_zero_volatility(const BinPanel& panel, double epsilon,
                                    CleaningReport* report) {
    BinPanel out = panel;
    // Smallest qualifying volatility in the previous processed day (NaN if none).
    double prev_day_min = missing_value();
    for (size_t d = 0; d < out.n_days(); ++d) {
        double day_min = missing_value();
        for (const Bin& b : out.grid[d])
            if (b.volatility > epsilon && !(b.volatility >= day_min))  // NaN-safe min
                day_min = b.volatility;
        DaySubstitutions subs{out.days[d], 0, 0};
        for (Bin& b : out.grid[d]) {
            if (b.empty() || is_missing(b.volatility) || b.volatility > epsilon) continue;
            double repl = !is_missing(day_min) ? day_min : prev_day_min;
            if (is_missing(repl)) {
                b.volatility = missing_value();
                ++subs.n_unresolved;
            } else {
                b.volatility = repl;
                ++subs.n_substituted;
            }
        }
        // Recompute after substitution so the next day sees updated values.
        double updated_min = missing_value();
        for (const Bin& b : out.grid[d])
            if (b.volatility > epsilon && !(b.volatility >= updated_min))
                updated_min = b.volatility;
        prev_day_min = updated_min;
        if (report && (subs.n_substituted || subs.n_unresolved))
            report->substitutions.push_back(subs);
    }
    return out;
}

BinPanel clean_panel(const BinPanel& panel, double threshold, double epsilon,
                     const std::vector<Date>& excluded_days, CleaningReport* report) {
    return substitute_zero_volatility(
        filter_incomplete_days(panel, threshold, excluded_days, report), epsilon, report);
}

void write_cleaning_report(std::ostream& out, const CleaningReport& report) {
    for (const auto& r : report.removed_days) {
        nlohmann::json j{{"record", "day_removed"},
                         {"date", date_to_iso(r.day)},
                         {"available_bins", r.n_available},
                         {"total_bins", r.n_slots},
                         {"ratio", r.ratio()}};
        out << j.dump() << '\n';
    }
    for (const auto& s : report.substitutions) {
        nlohmann::json j{{"record", "volatility_substitution"},
                         {"date", date_to_iso(s.day)},
                         {"substituted", s.n_substituted},
                         {"unresolved", s.n_unresolved}};
        out << j.dump() << '\n';
    }
}

}  // namespace liq
