#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "liq/cleaning.hpp"

namespace {

liq::MarketConfig slots_market(int slots) {
    liq::MarketConfig m;
    m.open_ns = 9 * 60 * liq::kNsPerMin;
    m.bin_length_ns = 5 * liq::kNsPerMin;
    m.close_ns = m.open_ns + slots * m.bin_length_ns;
    m.validate();
    return m;
}

liq::BinPanel empty_panel(int slots, const std::vector<liq::Date>& days) {
    liq::BinPanel p;
    p.stock_id = "CLEAN";
    p.market = slots_market(slots);
    p.tick_size = 0.01;
    p.days = days;
    for (size_t d = 0; d < days.size(); ++d) {
        std::vector<liq::Bin> row(static_cast<size_t>(slots));
        for (int s = 0; s < slots; ++s) {
            row[static_cast<size_t>(s)].day = days[d];
            row[static_cast<size_t>(s)].slot = s;
        }
        p.grid.push_back(std::move(row));
    }
    return p;
}

void fill_bin(liq::BinPanel& p, size_t day_idx, int slot, double vol) {
    liq::Bin& b = p.at(day_idx, slot);
    b.n_trades = 3;
    b.open = b.high = b.low = b.close = 100.0;
    b.volatility = vol;
    b.spread = 0.05;
    b.spread_ticks = 5;
    b.book_size = 200;
    b.traded_value = 1000;
}

// Reference implementation of the substitution rule, kept deliberately naive:
// process days in order; within a day use its own smallest value above
// epsilon, else the previous processed day's post-substitution minimum.
liq::BinPanel brute_substitute(const liq::BinPanel& panel, double epsilon) {
    liq::BinPanel out = panel;
    double prev_min = liq::missing_value();
    for (size_t d = 0; d < out.n_days(); ++d) {
        double day_min = liq::missing_value();
        for (const auto& b : out.grid[d])
            if (b.volatility > epsilon && (std::isnan(day_min) || b.volatility < day_min))
                day_min = b.volatility;
        for (auto& b : out.grid[d]) {
            if (b.empty() || std::isnan(b.volatility) || b.volatility > epsilon) continue;
            double repl = !std::isnan(day_min) ? day_min : prev_min;
            b.volatility = repl;  // NaN when no qualifying value anywhere
        }
        double updated = liq::missing_value();
        for (const auto& b : out.grid[d])
            if (b.volatility > epsilon && (std::isnan(updated) || b.volatility < updated))
                updated = b.volatility;
        prev_min = updated;
    }
    return out;
}

bool panels_equal(const liq::BinPanel& a, const liq::BinPanel& b) {
    if (a.days != b.days) return false;
    if (a.n_days() != b.n_days()) return false;
    for (size_t d = 0; d < a.n_days(); ++d) {
        for (int s = 0; s < a.slots_per_day(); ++s) {
            for (liq::Var v : liq::kAllVars) {
                double x = a.value(d, s, v), y = b.value(d, s, v);
                bool same = (std::isnan(x) && std::isnan(y)) || x == y;
                if (!same) return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("day filter keeps days exactly at the threshold") {
    auto p = empty_panel(5, {10, 11, 12});
    // Day 10: 4/5 available (exactly 0.8). Day 11: 3/5. Day 12: 5/5.
    for (int s = 0; s < 4; ++s) fill_bin(p, 0, s, 1e-4);
    for (int s = 0; s < 3; ++s) fill_bin(p, 1, s, 1e-4);
    for (int s = 0; s < 5; ++s) fill_bin(p, 2, s, 1e-4);

    liq::CleaningReport report;
    auto out = liq::filter_incomplete_days(p, 0.8, {}, &report);
    CHECK(out.days == std::vector<liq::Date>{10, 12});
    REQUIRE(report.removed_days.size() == 1);
    CHECK(report.removed_days[0].day == 11);
    CHECK(report.removed_days[0].n_available == 3);
    CHECK(report.removed_days[0].n_slots == 5);
    CHECK(report.removed_days[0].ratio() == doctest::Approx(0.6));

    // Raising the threshold just above 0.8 now drops day 10 as well.
    auto stricter = liq::filter_incomplete_days(p, 0.8 + 1e-9);
    CHECK(stricter.days == std::vector<liq::Date>{12});

    // Threshold 0 keeps even all-empty days.
    auto lax = liq::filter_incomplete_days(p, 0.0);
    CHECK(lax.days == p.days);
}

TEST_CASE("day filter honours the explicit exclusion list") {
    auto p = empty_panel(2, {20, 21, 22});
    for (size_t d = 0; d < 3; ++d)
        for (int s = 0; s < 2; ++s) fill_bin(p, d, s, 1e-4);

    liq::CleaningReport report;
    auto out = liq::filter_incomplete_days(p, 0.8, {21, 99}, &report);
    CHECK(out.days == std::vector<liq::Date>{20, 22});
    REQUIRE(report.removed_days.size() == 1);
    CHECK(report.removed_days[0].day == 21);
    CHECK(report.removed_days[0].n_available == 2);  // availability recorded as observed
}

TEST_CASE("zero-volatility substitution uses same day then previous day") {
    auto p = empty_panel(4, {1, 2, 3, 4});
    // Day 1: {0, 5e-7, 2e-6, 3e-6} -> first two replaced by 2e-6.
    fill_bin(p, 0, 0, 0.0);
    fill_bin(p, 0, 1, 5e-7);
    fill_bin(p, 0, 2, 2e-6);
    fill_bin(p, 0, 3, 3e-6);
    // Day 2: all at/below epsilon -> previous day's min (2e-6).
    fill_bin(p, 1, 0, 1e-6);  // exactly epsilon counts as "zero"
    fill_bin(p, 1, 1, 0.0);
    // Day 3: all below epsilon again -> chains through day 2's substituted value.
    fill_bin(p, 2, 0, 0.0);
    // Day 4: has its own qualifying value.
    fill_bin(p, 3, 0, 0.0);
    fill_bin(p, 3, 1, 7e-6);

    liq::CleaningReport report;
    auto out = liq::substitute_zero_volatility(p, 1e-6, &report);

    CHECK(out.value(0, 0, liq::Var::Volatility) == doctest::Approx(2e-6));
    CHECK(out.value(0, 1, liq::Var::Volatility) == doctest::Approx(2e-6));
    CHECK(out.value(0, 2, liq::Var::Volatility) == doctest::Approx(2e-6));  // untouched
    CHECK(out.value(0, 3, liq::Var::Volatility) == doctest::Approx(3e-6));  // untouched
    CHECK(out.value(1, 0, liq::Var::Volatility) == doctest::Approx(2e-6));
    CHECK(out.value(1, 1, liq::Var::Volatility) == doctest::Approx(2e-6));
    CHECK(out.value(2, 0, liq::Var::Volatility) == doctest::Approx(2e-6));
    CHECK(out.value(3, 0, liq::Var::Volatility) == doctest::Approx(7e-6));

    // Non-volatility variables are untouched everywhere.
    CHECK(out.value(0, 0, liq::Var::Spread) == 0.05);
    CHECK(out.value(1, 1, liq::Var::Turnover) == 1000);

    REQUIRE(report.substitutions.size() == 4);
    CHECK(report.substitutions[0].day == 1);
    CHECK(report.substitutions[0].n_substituted == 2);
    CHECK(report.substitutions[1].n_substituted == 2);
    CHECK(report.substitutions[2].n_substituted == 1);
    CHECK(report.substitutions[3].n_substituted == 1);
    for (const auto& s : report.substitutions) CHECK(s.n_unresolved == 0);
}

TEST_CASE("substitution with no qualifying value anywhere marks bins missing") {
    auto p = empty_panel(2, {1, 2});
    fill_bin(p, 0, 0, 0.0);  // first day, nothing above epsilon yet
    fill_bin(p, 1, 0, 4e-6);
    fill_bin(p, 1, 1, 0.0);

    liq::CleaningReport report;
    auto out = liq::substitute_zero_volatility(p, 1e-6, &report);
    CHECK(liq::is_missing(out.value(0, 0, liq::Var::Volatility)));
    CHECK(out.value(1, 1, liq::Var::Volatility) == doctest::Approx(4e-6));

    REQUIRE(report.substitutions.size() == 2);
    CHECK(report.substitutions[0].day == 1);
    CHECK(report.substitutions[0].n_unresolved == 1);
    CHECK(report.substitutions[0].n_substituted == 0);
    CHECK(report.substitutions[1].n_substituted == 1);

    // Other variables survive in the unresolved bin.
    CHECK(out.value(0, 0, liq::Var::Spread) == 0.05);
    CHECK(out.at(0, 0).n_trades == 3);
}

TEST_CASE("substitution leaves empty bins and clean panels alone") {
    auto p = empty_panel(3, {1});
    fill_bin(p, 0, 0, 2e-4);
    fill_bin(p, 0, 1, 3e-4);
    // slot 2 stays empty
    liq::CleaningReport report;
    auto out = liq::substitute_zero_volatility(p, 1e-6, &report);
    CHECK(panels_equal(out, p));
    CHECK(report.substitutions.empty());
    CHECK(out.at(0, 2).empty());
    CHECK(liq::is_missing(out.value(0, 2, liq::Var::Volatility)));
}

TEST_CASE("clean_panel is the composition of filter and substitution") {
    auto p = empty_panel(4, {1, 2, 3});
    // Day 1: complete with zeros; day 2: only 1/4 bins (dropped); day 3: complete.
    fill_bin(p, 0, 0, 0.0);
    fill_bin(p, 0, 1, 5e-6);
    fill_bin(p, 0, 2, 6e-6);
    fill_bin(p, 0, 3, 7e-6);
    fill_bin(p, 1, 0, 1e-7);
    for (int s = 0; s < 4; ++s) fill_bin(p, 2, s, 0.0);

    liq::CleaningReport report;
    auto out = liq::clean_panel(p, 0.8, 1e-6, {}, &report);
    CHECK(out.days == std::vector<liq::Date>{1, 3});
    CHECK(out.value(0, 0, liq::Var::Volatility) == doctest::Approx(5e-6));
    // Day 3's zeros resolve against day 1 (day 2 was filtered out first).
    for (int s = 0; s < 4; ++s)
        CHECK(out.value(1, s, liq::Var::Volatility) == doctest::Approx(5e-6));
    REQUIRE(report.removed_days.size() == 1);
    CHECK(report.removed_days[0].day == 2);

    auto manual = liq::substitute_zero_volatility(
        liq::filter_incomplete_days(p, 0.8), 1e-6);
    CHECK(panels_equal(out, manual));
}

TEST_CASE("substitution matches the naive reference on randomized panels") {
    std::mt19937_64 rng(31415);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        int slots = 2 + static_cast<int>(rng() % 5);
        int n_days = 1 + static_cast<int>(rng() % 8);
        std::vector<liq::Date> days;
        for (int d = 0; d < n_days; ++d) days.push_back(100 + d);
        auto p = empty_panel(slots, days);
        for (int d = 0; d < n_days; ++d) {
            for (int s = 0; s < slots; ++s) {
                double r = u(rng);
                if (r < 0.2) continue;  // leave empty
                double vol;
                if (r < 0.45)
                    vol = 0.0;
                else if (r < 0.6)
                    vol = 1e-6 * u(rng);  // at or below epsilon
                else
                    vol = 1e-6 + 1e-5 * u(rng);
                fill_bin(p, static_cast<size_t>(d), s, vol);
            }
        }
        auto got = liq::substitute_zero_volatility(p, 1e-6);
        auto want = brute_substitute(p, 1e-6);
        CAPTURE(rep);
        CHECK(panels_equal(got, want));

        // Substitution is idempotent: a second pass changes nothing further
        // (unresolved bins are already missing, replacements exceed epsilon).
        auto again = liq::substitute_zero_volatility(got, 1e-6);
        CHECK(panels_equal(got, again));
    }
}

TEST_CASE("cleaning report serializes one JSON line per event") {
    liq::CleaningReport report;
    report.removed_days.push_back({liq::date_from_iso("2001-02-03"), 3, 5});
    report.substitutions.push_back({liq::date_from_iso("2001-02-04"), 2, 1});
    std::ostringstream out;
    liq::write_cleaning_report(out, report);
    std::istringstream lines(out.str());
    std::string l1, l2, l3;
    REQUIRE(std::getline(lines, l1));
    REQUIRE(std::getline(lines, l2));
    CHECK_FALSE(std::getline(lines, l3));
    CHECK(l1.find("\"day_removed\"") != std::string::npos);
    CHECK(l1.find("2001-02-03") != std::string::npos);
    CHECK(l1.find("\"available_bins\":3") != std::string::npos);
    CHECK(l2.find("\"volatility_substitution\"") != std::string::npos);
    CHECK(l2.find("\"substituted\":2") != std::string::npos);
    CHECK(l2.find("\"unresolved\":1") != std::string::npos);
}
