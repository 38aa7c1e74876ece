#include "liq/stationarize.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "liq/csv.hpp"
#include "liq/errors.hpp"
#include "liq/stats.hpp"

namespace liq {

SeasonalProfile seasonal_profile(const BinPanel& panel, Var variable, size_t day_begin,
                                 size_t day_end) {
    day_end = std::min(day_end, panel.n_days());
    if (day_begin >= day_end)
        throw DomainError(std::string("seasonal_profile: empty day range for ") +
                          std::string(var_name(variable)));
    int n_slots = panel.slots_per_day();
    SeasonalProfile p;
    p.variable = variable;
    p.mean_log.assign(static_cast<size_t>(n_slots), 0.0);
    p.median.resize(static_cast<size_t>(n_slots));
    p.q25.resize(static_cast<size_t>(n_slots));
    p.q75.resize(static_cast<size_t>(n_slots));
    p.n_days = day_end - day_begin;

    // Per-day mean over available bins, for the daily-mean-normalized quantile curves.
    std::vector<double> day_mean(panel.n_days(), missing_value());
    for (size_t d = day_begin; d < day_end; ++d) {
        double sum = 0;
        int n = 0;
        for (int s = 0; s < n_slots; ++s) {
            double x = panel.value(d, s, variable);
            if (is_missing(x)) continue;
            sum += x;
            ++n;
        }
        if (n > 0) day_mean[d] = sum / n;
    }

    std::vector<double> normalized;
    for (int s = 0; s < n_slots; ++s) {
        double log_sum = 0;
        size_t n = 0;
        normalized.clear();
        for (size_t d = day_begin; d < day_end; ++d) {
            double x = panel.value(d, s, variable);
            if (is_missing(x)) continue;
            if (!(x > 0))
                throw DomainError(std::string("seasonal_profile: non-positive ") +
                                  std::string(var_name(variable)) + " at " +
                                  date_to_iso(panel.days[d]) + " slot " + std::to_string(s));
            log_sum += std::log(x);
            ++n;
            if (day_mean[d] > 0) normalized.push_back(x / day_mean[d]);
        }
        if (n == 0)
            throw DomainError(std::string("seasonal_profile: no available days at slot ") +
                              std::to_string(s) + " for " + std::string(var_name(variable)));
        p.mean_log[static_cast<size_t>(s)] = log_sum / static_cast<double>(n);
        p.median[static_cast<size_t>(s)] = stats::median(normalized);
        p.q25[static_cast<size_t>(s)] = stats::quantile(normalized, 0.25);
        p.q75[static_cast<size_t>(s)] = stats::quantile(normalized, 0.75);
    }
    return p;
}

PanelSeries deseasonalize(const BinPanel& panel, Var variable, const SeasonalProfile& profile) {
    int n_slots = panel.slots_per_day();
    if (profile.n_slots() != n_slots)
        throw ValidationError("deseasonalize: profile has " + std::to_string(profile.n_slots()) +
                              " slots, panel has " + std::to_string(n_slots));
    PanelSeries out;
    out.variable = variable;
    out.days = panel.days;
    out.values.resize(panel.n_days());
    for (size_t d = 0; d < panel.n_days(); ++d) {
        auto& row = out.values[d];
        row.assign(static_cast<size_t>(n_slots), missing_value());
        for (int s = 0; s < n_slots; ++s) {
            double x = panel.value(d, s, variable);
            if (is_missing(x)) continue;
            if (!(x > 0))
                throw DomainError(std::string("deseasonalize: non-positive ") +
                                  std::string(var_name(variable)) + " at " +
                                  date_to_iso(panel.days[d]) + " slot " + std::to_string(s));
            row[static_cast<size_t>(s)] = std::log(x) - profile.mean_log[static_cast<size_t>(s)];
        }
    }
    return out;
}

std::vector<std::vector<double>> reseasonalize(const PanelSeries& series,
                                               const SeasonalProfile& profile) {
    if (profile.n_slots() != series.n_slots() && series.n_days() > 0)
        throw ValidationError("reseasonalize: profile/series slot mismatch");
    std::vector<std::vector<double>> out(series.n_days());
    for (size_t d = 0; d < series.n_days(); ++d) {
        const auto& row = series.values[d];
        out[d].assign(row.size(), missing_value());
        for (size_t s = 0; s < row.size(); ++s)
            if (!is_missing(row[s])) out[d][s] = std::exp(row[s] + profile.mean_log[s]);
    }
    return out;
}

void write_profile_csv(std::ostream& out, const SeasonalProfile& profile) {
    csv::Writer w(out, kProfileHeader);
    for (int s = 0; s < profile.n_slots(); ++s) {
        size_t i = static_cast<size_t>(s);
        w.row({csv::format_int(s), csv::format_double(profile.mean_log[i]),
               csv::format_double(profile.median[i]), csv::format_double(profile.q25[i]),
               csv::format_double(profile.q75[i])});
    }
}

SeasonalProfile read_profile_csv(std::istream& in, Var variable, std::string name) {
    csv::Reader reader(in, kProfileHeader, name);
    SeasonalProfile p;
    p.variable = variable;
    std::vector<std::string_view> f;
    while (reader.next_row(f)) {
        if (csv::parse_int(f[0], reader.line()) != static_cast<int64_t>(p.mean_log.size()))
            throw ParseError(name + ": slots must be contiguous from 0", reader.line());
        p.mean_log.push_back(csv::parse_double(f[1], reader.line()));
        p.median.push_back(csv::parse_double(f[2], reader.line()));
        p.q25.push_back(csv::parse_double(f[3], reader.line()));
        p.q75.push_back(csv::parse_double(f[4], reader.line()));
    }
    if (p.mean_log.empty()) throw ParseError(name + ": no profile rows");
    p.n_days = 0;  // unknown from file
    return p;
}

void write_series_csv(std::ostream& out, const PanelSeries& series) {
    csv::Writer w(out, kSeriesHeader);
    for (size_t d = 0; d < series.n_days(); ++d)
        for (size_t s = 0; s < series.values[d].size(); ++s) {
            double v = series.values[d][s];
            w.row({date_to_iso(series.days[d]), csv::format_int(static_cast<int64_t>(s)),
                   csv::format_double(v), is_missing(v) ? "1" : "0"});
        }
}

PanelSeries read_series_csv(std::istream& in, Var variable, std::string name) {
    csv::Reader reader(in, kSeriesHeader, name);
    PanelSeries out;
    out.variable = variable;
    std::vector<std::string_view> f;
    Date cur_day = 0;
    bool have_day = false;
    std::vector<double> row;
    int n_slots = -1;
    auto flush = [&] {
        if (!have_day) return;
        if (n_slots < 0)
            n_slots = static_cast<int>(row.size());
        else if (static_cast<int>(row.size()) != n_slots)
            throw ParseError(name + ": inconsistent slots per day for " + date_to_iso(cur_day));
        out.days.push_back(cur_day);
        out.values.push_back(std::move(row));
        row.clear();
    };
    while (reader.next_row(f)) {
        Date day = date_from_iso(f[0]);
        int slot = static_cast<int>(csv::parse_int(f[1], reader.line()));
        double v = csv::parse_double(f[2], reader.line());
        bool missing = csv::parse_int(f[3], reader.line()) != 0;
        if (missing) v = missing_value();
        if (!have_day || day != cur_day) {
            flush();
            if (!out.days.empty() && day <= out.days.back())
                throw ParseError(name + ": days must be ascending", reader.line());
            cur_day = day;
            have_day = true;
        }
        if (slot != static_cast<int>(row.size()))
            throw ParseError(name + ": slots must be contiguous from 0", reader.line());
        row.push_back(v);
    }
    flush();
    return out;
}

}  // namespace liq
