#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liq/binning.hpp"
#include "liq/linmodels.hpp"
#include "liq/types.hpp"

namespace liq {

// One train/validation window, as day-index ranges into the panel.
struct Batch {
    size_t train_begin = 0;
    size_t train_end = 0;  // == valid_begin
    size_t valid_begin = 0;
    size_t valid_end = 0;
};

struct BatchScheme {
    int n_batches = 20;
    int train_days = 150;
    int valid_days = 150;
    std::vector<Batch> batches;
};

// Equally spaced overlapping batches: batch i starts at day
// round(i * (n_days - train - valid) / (n_batches - 1)), so the first batch
// opens the sample and the last one's validation window closes it. With no
// slack the batches coincide (duplicates are kept). Throws ConfigError when
// n_days < train + valid.
BatchScheme make_batches(size_t n_days, int n_batches = 20, int train_days = 150,
                         int valid_days = 150);

// Whether seasonal profiles used inside cross-validation come from each
// batch's training days only (keeps validation genuinely out of sample) or
// from the full panel.
enum class ProfileMode { TrainOnly, FullSample };
std::string_view profile_mode_name(ProfileMode mode);
ProfileMode profile_mode_from_name(std::string_view name);

enum class SubsetPolicy { All, ArOnly };  // all 16 subsets, or baseline + {target}

// Cross-validated score of one (subset, lag) spec. The empty subset is scored
// once with lag recorded as 0. Under the all-batches rule a spec that fails on
// any batch has missing mean/std; n_batches_used still counts the batches that
// scored.
struct SpecScore {
    VarSet subset = 0;
    int lag = 0;
    double mean_r2 = missing_value();
    double std_r2 = missing_value();  // population std across batches
    int n_batches_used = 0;
};

struct CVResult {
    Var target = Var::Volatility;
    std::vector<SpecScore> table;  // subsets in tie-break order, lags ascending
    std::optional<ModelSpec> best;
    double best_mean_r2 = missing_value();
};

// The full hyperparameter search: every requested subset at every lag
// 1..max_lag (plus the empty baseline), fit on each batch's training days and
// scored by out-of-sample R² on its validation days, averaged across batches.
// Best spec maximizes mean R²; ties break to smaller lag, then smaller subset
// cardinality, then lexicographic member order. `layout` controls lag windows
// (see SegmentLayout); `jobs` parallelizes over batches without changing any
// output byte.
CVResult grid_search(const BinPanel& panel, Var target, int max_lag = 40,
                     SubsetPolicy subsets = SubsetPolicy::All, const BatchScheme& scheme = {},
                     ProfileMode profile_mode = ProfileMode::TrainOnly,
                     const SegmentLayout& layout = {}, int jobs = 1);

inline constexpr std::string_view kScoresHeader = "subset,lag,mean_r2,std_r2,n_batches_used";

void write_scores_csv(std::ostream& out, const CVResult& result);
CVResult read_scores_csv(std::istream& in, Var target, std::string name = "scores");

// Derives the lag-window layout for a panel's market (lunch boundary).
SegmentLayout layout_for_market(const MarketConfig& market);

}  // namespace liq
