#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "liq/linmodels.hpp"
#include "liq/types.hpp"

namespace liq {

// Whether the cause enters the unrestricted model with all lags 1..p jointly
// (degrees of freedom p) or with lag p alone (1 degree of freedom).
enum class GrangerMode { JointUpToLag, SingleLag };
std::string_view granger_mode_name(GrangerMode mode);
GrangerMode granger_mode_from_name(std::string_view name);

struct GrangerResult {
    Var cause = Var::Volatility;
    Var effect = Var::Spread;
    int lag = 1;
    double statistic = missing_value();  // NaN when the cell failed or degenerated
    int dof = 1;
    double p_value = missing_value();
    bool reject = false;     // p_value < alpha
    bool degenerate = false; // unrestricted fit left zero residual variance
};

// Wald test of "cause does not Granger-cause effect": compares the effect's
// own-lags model against one augmented with the cause's lags, on identical
// rows. statistic = n * (SSR_restricted - SSR_unrestricted) / SSR_unrestricted,
// chi-squared with dof degrees of freedom. Rank-deficient designs are handled
// by projection (an uninformative cause scores 0); too few rows throws
// FitError.
GrangerResult granger_test(const FlatSeries& flat, Var effect, Var cause, int lag,
                           double alpha = 0.001, GrangerMode mode = GrangerMode::JointUpToLag);
GrangerResult granger_test(const SeriesSet& series, Var effect, Var cause, int lag,
                           double alpha = 0.001, GrangerMode mode = GrangerMode::JointUpToLag,
                           const SegmentLayout& layout = {});

// All 12 ordered pairs at every lag 1..max_lag. Cell failures are recorded as
// missing results; the grid continues. Output order: cause, then effect (both
// canonical), then lag — independent of jobs.
std::vector<GrangerResult> granger_grid(const SeriesSet& series, int max_lag,
                                        double alpha = 0.001,
                                        GrangerMode mode = GrangerMode::JointUpToLag,
                                        const SegmentLayout& layout = {}, int jobs = 1);

// corr[u][v][k] = Pearson correlation of u_t with v_{t-k}, pairs (t, t-k)
// kept only when both values are present and the window stays inside one
// segment. Zero-variance sides give NaN; u == v at k == 0 gives exactly 1.
struct LaggedCorrelationTable {
    int max_lag = 9;
    std::array<std::array<std::vector<double>, kNumVars>, kNumVars> corr;
};

LaggedCorrelationTable lagged_correlations(const SeriesSet& series, int max_lag = 9,
                                           const SegmentLayout& layout = {});

// Cross-stock aggregation: per (ordered pair, lag), the share of stocks whose
// test rejected, over stocks with a scored cell.
struct GrangerSummaryRow {
    Var cause = Var::Volatility;
    Var effect = Var::Spread;
    int lag = 1;
    double prop_rejected = missing_value();
    int n_stocks = 0;
};

std::vector<GrangerSummaryRow> summarize_granger(
    const std::vector<std::vector<GrangerResult>>& per_stock);

inline constexpr std::string_view kGrangerHeader = "cause,effect,lag,statistic,dof,p_value,reject";
inline constexpr std::string_view kGrangerSummaryHeader = "pair,lag,prop_rejected,n_stocks";
inline constexpr std::string_view kCorrelationsHeader = "u,v,lag,correlation";

void write_granger_csv(std::ostream& out, const std::vector<GrangerResult>& results);
std::vector<GrangerResult> read_granger_csv(std::istream& in, std::string name = "granger");
void write_granger_summary_csv(std::ostream& out, const std::vector<GrangerSummaryRow>& rows);
void write_correlations_csv(std::ostream& out, const LaggedCorrelationTable& table);

}  // namespace liq
