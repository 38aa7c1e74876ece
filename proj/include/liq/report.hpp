#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liq/binning.hpp"
#include "liq/linmodels.hpp"
#include "liq/selection.hpp"
#include "liq/types.hpp"

namespace liq {

// Descriptive per-stock averages taken over non-empty bins.
struct DescriptiveStats {
    double avg_spread_bp = missing_value();     // quoted spread / close, in basis points
    double avg_spread_ticks = missing_value();  // quoted spread / tick size
    double avg_book_size = missing_value();
    double avg_turnover = missing_value();
};

DescriptiveStats descriptive_stats(const BinPanel& panel);

// Everything the aggregation stage needs from one stock's estimation run.
// `best_ar` is the winner restricted to the target-only subset, `best_var`
// the overall winner; `ar_coef` holds the best AR model's lag coefficients.
struct StockRecord {
    std::string stock_id;
    std::string zone;
    DescriptiveStats descriptive;
    std::array<std::optional<SpecScore>, kNumVars> best_ar;
    std::array<std::optional<SpecScore>, kNumVars> best_var;
    std::array<std::vector<double>, kNumVars> ar_coef;
};

void write_stock_record(std::ostream& out, const StockRecord& record);
StockRecord read_stock_record(std::istream& in, std::string name = "stock record");

// Optional per-stock metadata (capitalization). Header:
// stock_id,zone,market_cap,free_float — numeric fields may be blank.
struct StockMeta {
    std::string stock_id;
    std::string zone;
    double market_cap = missing_value();
    double free_float = missing_value();
};

inline constexpr std::string_view kMetadataHeader = "stock_id,zone,market_cap,free_float";
std::vector<StockMeta> read_metadata_csv(std::istream& in, std::string name = "metadata");

// Spread-in-ticks classification: at most 1.3 average ticks is "large" (tick),
// at least 2 is "small", in between is "medium".
std::string_view tick_class(double avg_spread_ticks);

// Decay rate of an AR model's coefficient magnitudes: the least-squares slope
// of -log|a_i| against the lag index i, over lags with |a_i| > 1e-6. Needs at
// least two usable coefficients; returns the missing value otherwise. This is
// a documented convention of this implementation; larger values mean shorter
// memory.
double memory_lambda(const std::vector<double>& lag_coefs);
double memory_lambda(const FittedModel& model);

// Z-scores values within each zone (population standard deviation); with
// center = false the values are only divided by the zone deviation. Missing
// values pass through and are excluded from the zone statistics. Throws
// DomainError, naming the zone, when a zone has fewer than two usable values
// or zero deviation.
std::vector<double> cross_sectional_normalize(const std::vector<double>& values,
                                              const std::vector<std::string>& zones,
                                              bool center = true);

struct StockSummary {
    std::string stock_id;
    std::string zone;
    std::string tick_class;
    DescriptiveStats descriptive;
    double market_cap = missing_value();
    double free_float = missing_value();
    std::array<std::optional<SpecScore>, kNumVars> best_ar;
    std::array<std::optional<SpecScore>, kNumVars> best_var;
    std::array<double, kNumVars> lambda;          // missing when undefined
    std::array<double, kNumVars> first_lag_coef;  // missing when unavailable
};

struct ZoneAggregate {
    std::string zone;
    int n_stocks = 0;
    // Per variable, over the stocks whose best result exists.
    std::array<double, kNumVars> ar_r2_mean, ar_r2_std, ar_lag_mean;
    std::array<double, kNumVars> var_r2_mean, var_r2_std, var_lag_mean;
    std::array<int, kNumVars> n_ar{}, n_var{};
};

struct SummaryReport {
    std::vector<StockSummary> stocks;      // input order
    std::vector<ZoneAggregate> zones;      // first-appearance order
    std::vector<std::string> warnings;     // e.g. metadata gaps
};

// Deterministic fold of per-stock records (any arrival order) joined with
// optional metadata; aggregate means are plain arithmetic means of the
// contributing per-stock values.
SummaryReport summarize(const std::vector<StockRecord>& records,
                        const std::vector<StockMeta>& metadata = {});

// Per-slot median and quartiles of values normalized so each day's average
// is 1; slots with no usable observations yield missing values.
struct QuantileCurves {
    Var variable = Var::Volatility;
    std::vector<double> median, q25, q75;
};

QuantileCurves intraday_quantile_curves(const BinPanel& panel, Var variable);

// CSV emitters. Headers:
//   stock_summaries: stock_id,zone,tick_class,avg_spread_bp,avg_spread_ticks,
//                    avg_book_size,avg_turnover,market_cap,variable,
//                    best_ar_lag,best_ar_r2,best_var_subset,best_var_lag,
//                    best_var_r2,lambda,first_lag_coef   (one row per variable)
//   table2: zone,model,n_stocks,volatility,spread,book,turnover
//           cells "mean (std)" of the best out-of-sample R², both to three
//           decimals
//   table3: zone,model,n_stocks,volatility,spread,book,turnover
//           cells: average best lag to one decimal
//   scatter_spread_r2: stock_id,zone,variable,avg_spread_ticks,ar_r2,var_r2
//   scatter_cap_first_coef: stock_id,zone,variable,scaled_cap,first_lag_coef
//   scatter_cap_lambda: stock_id,zone,variable,scaled_cap,lambda
//   r2_improvement: zone,variable,stock_id,improvement  (VAR minus AR,
//                   sorted ascending within zone and variable)
//   quantile_curves: variable,slot,median,q25,q75
// scaled_cap divides capitalization by the zone deviation without centering;
// the capitalization scatters need metadata and at least two capitalized
// stocks per zone.
void write_stock_summaries_csv(std::ostream& out, const SummaryReport& report);
void write_table2_csv(std::ostream& out, const SummaryReport& report);
void write_table3_csv(std::ostream& out, const SummaryReport& report);
void write_scatter_spread_r2_csv(std::ostream& out, const SummaryReport& report);
bool write_scatter_cap_first_coef_csv(std::ostream& out, const SummaryReport& report);
bool write_scatter_cap_lambda_csv(std::ostream& out, const SummaryReport& report);
void write_r2_improvement_csv(std::ostream& out, const SummaryReport& report);
void write_quantile_curves_csv(std::ostream& out, const std::vector<QuantileCurves>& curves);

// "mean (std)" with both numbers to three decimals, e.g. "0.448 (0.045)".
std::string format_mean_std(double mean, double std);

}  // namespace liq
