#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liq/stationarize.hpp"
#include "liq/types.hpp"

namespace liq {

// Which variable is predicted from which lagged variables. An empty subset is
// the seasonal-mean baseline (intercept only); lag is then ignored (kept 0).
struct ModelSpec {
    Var target = Var::Volatility;
    VarSet subset = 0;
    int lag = 0;

    bool operator==(const ModelSpec&) const = default;
};

// OLS result for one target equation.
struct FittedModel {
    ModelSpec spec;
    double intercept = 0;
    // One coefficient per (explanatory variable, lag), variable-major in the
    // canonical order (volatility, spread, book, turnover), lags 1..p within
    // each variable.
    std::vector<double> coef;
    double residual_variance = 0;  // SSR / n_obs (ML divisor)
    size_t n_obs = 0;
};

// The four deseasonalized series of one stock; entries for unused variables
// may be left empty (zero days).
using SeriesSet = std::array<PanelSeries, kNumVars>;

// How lag windows may span session gaps. Defaults forbid windows crossing
// either the overnight gap or the lunch break.
struct SegmentLayout {
    int morning_bins = 0;  // slots before the lunch break; 0 means no break
    bool cross_days = false;
    bool cross_breaks = false;
};

// Series flattened to (day, slot) order with a segment id per element; lag
// windows must stay within one segment.
struct FlatSeries {
    std::array<std::vector<double>, kNumVars> x;  // empty for absent variables
    std::vector<int32_t> seg;
    std::vector<size_t> day_begin;  // flattened index of each day's first slot, plus end
    int n_slots = 0;

    size_t size() const { return seg.size(); }
    size_t n_days() const { return day_begin.empty() ? 0 : day_begin.size() - 1; }
};

FlatSeries flatten_series(const SeriesSet& series, const SegmentLayout& layout);

// Regression rows for one spec over a day range [day_begin, day_end).
// Column 0 is the constant; the rest follow FittedModel's coefficient order.
// row_filter widens the completeness requirement (rows must have complete lags
// for every variable in it) so different subsets can share identical rows;
// burn >= lag discards rows whose segment history is shorter than burn even
// when the spec needs only `lag` lags.
struct Design {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> col_names;
};

Design build_design(const FlatSeries& flat, Var target, VarSet subset, int lag,
                    size_t day_begin, size_t day_end, VarSet row_filter = 0, int burn = -1);

// Equation-by-equation OLS with intercept over [day_begin, day_end).
// Throws FitError when usable rows < coefficients + 11, or when the design is
// rank deficient (message names the collinear columns).
FittedModel fit_linear(const SeriesSet& series, const ModelSpec& spec, size_t day_begin,
                       size_t day_end, const SegmentLayout& layout = {});
FittedModel fit_linear(const FlatSeries& flat, const ModelSpec& spec, size_t day_begin,
                       size_t day_end, VarSet row_filter = 0, int burn = -1);

// intercept + coefficient · window; window is ordered exactly like coef.
// Throws ValidationError on size mismatch or non-finite entries.
double predict_one_step(const FittedModel& model, const std::vector<double>& window);

// 1 - Var(prediction error) / Var(target) over the validation rows, both
// population variances around the validation sample's own means. NaN when the
// validation target variance is zero or no rows are usable.
double r2_out_of_sample(const FittedModel& model, const SeriesSet& series, size_t day_begin,
                        size_t day_end, const SegmentLayout& layout = {});
double r2_out_of_sample(const FittedModel& model, const FlatSeries& flat, size_t day_begin,
                        size_t day_end, VarSet row_filter = 0, int burn = -1);

// One line-delimited JSON record per model: spec, intercept, coefficients in
// coef order, residual variance, n_obs.
void write_model_record(std::ostream& out, const FittedModel& model);
FittedModel parse_model_record(const std::string& line);

}  // namespace liq
