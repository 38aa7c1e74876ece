#include "liq/selection.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Dense>

#include "liq/csv.hpp"
#include "liq/errors.hpp"
#include "liq/parallel.hpp"
#include "liq/stats.hpp"

namespace liq {

BatchScheme make_batches(size_t n_days, int n_batches, int train_days, int valid_days) {
    if (n_batches < 1) throw ConfigError("make_batches: need at least one batch");
    if (train_days < 1 || valid_days < 1)
        throw ConfigError("make_batches: train and validation windows must be non-empty");
    size_t need = static_cast<size_t>(train_days) + static_cast<size_t>(valid_days);
    if (n_days < need)
        throw ConfigError("make_batches: " + std::to_string(n_days) + " days < train+valid = " +
                          std::to_string(need));
    BatchScheme scheme;
    scheme.n_batches = n_batches;
    scheme.train_days = train_days;
    scheme.valid_days = valid_days;
    size_t slack = n_days - need;
    for (int i = 0; i < n_batches; ++i) {
        size_t start;
        if (n_batches == 1) {
            start = 0;
        } else {
            start = static_cast<size_t>(std::llround(static_cast<double>(i) *
                                                     static_cast<double>(slack) /
                                                     static_cast<double>(n_batches - 1)));
        }
        Batch b;
        b.train_begin = start;
        b.train_end = start + static_cast<size_t>(train_days);
        b.valid_begin = b.train_end;
        b.valid_end = b.valid_begin + static_cast<size_t>(valid_days);
        scheme.batches.push_back(b);
    }
    return scheme;
}

std::string_view profile_mode_name(ProfileMode mode) {
    return mode == ProfileMode::TrainOnly ? "train-only" : "full-sample";
}

ProfileMode profile_mode_from_name(std::string_view name) {
    if (name == "train-only") return ProfileMode::TrainOnly;
    if (name == "full-sample") return ProfileMode::FullSample;
    throw ConfigError("unknown profile mode '" + std::string(name) +
                      "' (expected train-only or full-sample)");
}

SegmentLayout layout_for_market(const MarketConfig& market) {
    SegmentLayout layout;
    layout.morning_bins = market.has_lunch ? market.morning_bins() : 0;
    return layout;
}

namespace {

std::vector<VarSet> ordered_subsets(SubsetPolicy policy, Var target) {
    std::vector<VarSet> subsets;
    if (policy == SubsetPolicy::All) {
        for (int m = 0; m < kNumSubsets; ++m) subsets.push_back(static_cast<VarSet>(m));
    } else {
        subsets.push_back(0);
        subsets.push_back(set_with(0, target));
    }
    std::sort(subsets.begin(), subsets.end(), set_less);
    return subsets;
}

// Index of (subset_rank, lag) in the flat score table: the empty subset (rank
// 0 after sorting) holds one slot; every other subset holds max_lag slots.
size_t spec_index(size_t subset_rank, int lag, int max_lag) {
    if (subset_rank == 0) return 0;
    return 1 + (subset_rank - 1) * static_cast<size_t>(max_lag) + static_cast<size_t>(lag - 1);
}

struct GramLevel {
    Eigen::MatrixXd g;   // m x m, lower triangle maintained
    Eigen::VectorXd b;   // sum z*y
    double syy = 0;      // sum y^2 over added rows

    explicit GramLevel(int m) : g(Eigen::MatrixXd::Zero(m, m)), b(Eigen::VectorXd::Zero(m)) {}

    void add(const Eigen::VectorXd& row_z, double y) {
        g.selfadjointView<Eigen::Lower>().rankUpdate(row_z, 1.0);
        b += row_z * y;
        syy += y * y;
    }
};

// Rows of one window (train or valid) usable by every spec in the grid: the
// target is present and the max_lag immediately preceding slots of the same
// segment carry all filter variables.  Restricting the whole grid to this one
// row set keeps scores at different lags comparable — each candidate is judged
// on identical training and validation samples.
std::vector<size_t> window_rows(const FlatSeries& flat, const std::vector<int>& run, Var target,
                                size_t day_begin, size_t day_end, int max_lag) {
    std::vector<size_t> rows;
    const auto& yt = flat.x[static_cast<size_t>(static_cast<int>(target))];
    for (size_t t = flat.day_begin[day_begin]; t < flat.day_begin[day_end]; ++t) {
        if (is_missing(yt[t])) continue;
        int depth = (t > 0 && flat.seg[t - 1] == flat.seg[t]) ? run[t - 1] : 0;
        if (depth >= max_lag) rows.push_back(t);
    }
    return rows;
}

struct BatchScores {
    std::vector<double> r2;  // spec-indexed, NaN = missing
    bool failed = false;     // whole batch unusable (e.g. profile undefined)
};

class BatchEvaluator {
public:
    BatchEvaluator(const BinPanel& panel, Var target, int max_lag,
                   const std::vector<VarSet>& subsets, const SegmentLayout& layout,
                   const FlatSeries* shared_flat, size_t n_specs)
        : panel_(panel),
          target_(target),
          max_lag_(max_lag),
          subsets_(subsets),
          layout_(layout),
          shared_flat_(shared_flat),
          n_specs_(n_specs) {
        row_filter_ = 0;
        for (VarSet s : subsets_) row_filter_ = static_cast<VarSet>(row_filter_ | s);
        row_filter_ = set_with(row_filter_, target_);
        for (Var v : kAllVars)
            if (set_contains(row_filter_, v)) filter_vars_.push_back(v);
    }

    BatchScores evaluate(const Batch& batch) const {
        BatchScores out;
        out.r2.assign(n_specs_, missing_value());
        try {
            const FlatSeries* flat = shared_flat_;
            FlatSeries local;
            if (!flat) {
                SeriesSet series;
                for (Var v : filter_vars_) {
                    auto profile =
                        seasonal_profile(panel_, v, batch.train_begin, batch.train_end);
                    series[static_cast<size_t>(static_cast<int>(v))] =
                        deseasonalize(panel_, v, profile);
                }
                local = flatten_series(series, layout_);
                flat = &local;
            }
            score_batch(*flat, batch, out);
        } catch (const Error&) {
            out.failed = true;
            out.r2.assign(n_specs_, missing_value());
        }
        return out;
    }

private:
    // z layout: column 0 constant, then lag-major blocks of the filter
    // variables, so the columns for lags <= p form a contiguous prefix.
    int col_of(size_t filter_pos, int lagi) const {
        return 1 + (lagi - 1) * static_cast<int>(filter_vars_.size()) +
               static_cast<int>(filter_pos);
    }

    void fill_z(const FlatSeries& flat, size_t t, int depth, Eigen::VectorXd& z) const {
        z(0) = 1.0;
        for (size_t j = 0; j < filter_vars_.size(); ++j) {
            const auto& xs = flat.x[static_cast<size_t>(static_cast<int>(filter_vars_[j]))];
            for (int i = 1; i <= depth; ++i)
                z(col_of(j, i)) = xs[t - static_cast<size_t>(i)];
        }
    }

    void score_batch(const FlatSeries& flat, const Batch& batch, BatchScores& out) const {
        int nv = static_cast<int>(filter_vars_.size());
        int m = 1 + nv * max_lag_;
        const auto& yt = flat.x[static_cast<size_t>(static_cast<int>(target_))];

        // Consecutive filter-complete run lengths, shared by both windows.
        std::vector<int> run(flat.size(), 0);
        for (size_t t = 0; t < flat.size(); ++t) {
            bool ok = true;
            for (Var v : filter_vars_)
                if (is_missing(flat.x[static_cast<size_t>(static_cast<int>(v))][t])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            run[t] = (t > 0 && flat.seg[t - 1] == flat.seg[t]) ? run[t - 1] + 1 : 1;
        }
        std::vector<size_t> train = window_rows(flat, run, target_, batch.train_begin,
                                                batch.train_end, max_lag_);
        std::vector<size_t> valid = window_rows(flat, run, target_, batch.valid_begin,
                                                batch.valid_end, max_lag_);

        score_baseline(train, valid, yt, out);

        GramLevel gt(m), gv(m);
        Eigen::VectorXd z(m);
        for (size_t t : train) {
            fill_z(flat, t, max_lag_, z);
            gt.add(z, yt[t]);
        }
        for (size_t t : valid) {
            fill_z(flat, t, max_lag_, z);
            gv.add(z, yt[t]);
        }
        for (int p = max_lag_; p >= 1; --p)
            for (size_t rank = 1; rank < subsets_.size(); ++rank)
                score_spec(rank, p, gt, gv, out);
    }

    void score_baseline(const std::vector<size_t>& train, const std::vector<size_t>& valid,
                        const std::vector<double>& yt, BatchScores& out) const {
        if (train.size() < 11) return;
        double sy = 0;
        for (size_t t : train) sy += yt[t];
        double intercept = sy / static_cast<double>(train.size());
        double vy_s = 0, vy_ss = 0, verr_s = 0, verr_ss = 0;
        for (size_t t : valid) {
            double e = yt[t] - intercept;
            vy_s += yt[t];
            vy_ss += yt[t] * yt[t];
            verr_s += e;
            verr_ss += e * e;
        }
        if (valid.empty()) return;
        double dn = static_cast<double>(valid.size());
        double var_y = vy_ss / dn - (vy_s / dn) * (vy_s / dn);
        if (!(var_y > 0)) return;
        double var_e = std::max(0.0, verr_ss / dn - (verr_s / dn) * (verr_s / dn));
        out.r2[0] = 1.0 - var_e / var_y;
    }

    void score_spec(size_t rank, int p, const GramLevel& gt, const GramLevel& gv,
                    BatchScores& out) const {
        VarSet subset = subsets_[rank];
        int k = set_size(subset) * p;
        // Column picks in coefficient order: variable-major, lag-minor.
        std::vector<int> cols;
        cols.reserve(static_cast<size_t>(k) + 1);
        cols.push_back(0);
        for (size_t j = 0; j < filter_vars_.size(); ++j)
            if (set_contains(subset, filter_vars_[j]))
                for (int i = 1; i <= p; ++i) cols.push_back(col_of(j, i));

        auto kk = static_cast<Eigen::Index>(cols.size());
        Eigen::MatrixXd a(kk, kk);
        Eigen::VectorXd bt(kk), bv(kk), sv(kk);
        Eigen::MatrixXd av(kk, kk);
        for (Eigen::Index r = 0; r < kk; ++r) {
            for (Eigen::Index c = 0; c < kk; ++c) {
                int i = std::max(cols[static_cast<size_t>(r)], cols[static_cast<size_t>(c)]);
                int j = std::min(cols[static_cast<size_t>(r)], cols[static_cast<size_t>(c)]);
                a(r, c) = gt.g(i, j);   // lower triangle holds the data
                av(r, c) = gv.g(i, j);
            }
            bt(r) = gt.b(cols[static_cast<size_t>(r)]);
            bv(r) = gv.b(cols[static_cast<size_t>(r)]);
        }
        double n_train = a(0, 0);
        double n_valid = av(0, 0);
        if (n_train < static_cast<double>(k) + 11 || n_valid == 0) return;

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        if (qr.rank() < kk) return;
        Eigen::VectorXd beta = qr.solve(bt);

        sv = av.col(0);  // column of the constant: per-column sums over valid rows
        double sse = gv.syy - 2.0 * beta.dot(bv) + beta.dot(av * beta);
        double serr = bv(0) - beta.dot(sv);  // sum(y - z.beta)
        double mean_e = serr / n_valid;
        double var_e = std::max(0.0, sse / n_valid - mean_e * mean_e);
        double mean_y = bv(0) / n_valid;
        double var_y = gv.syy / n_valid - mean_y * mean_y;
        if (!(var_y > 0)) return;
        out.r2[spec_index(rank, p, max_lag_)] = 1.0 - var_e / var_y;
    }

    const BinPanel& panel_;
    Var target_;
    int max_lag_;
    const std::vector<VarSet>& subsets_;
    SegmentLayout layout_;
    const FlatSeries* shared_flat_;
    size_t n_specs_;
    VarSet row_filter_ = 0;
    std::vector<Var> filter_vars_;
};

}  // namespace

namespace {

// Applies the tie-break order: higher mean R^2, then smaller lag, then the
// subset order (cardinality, then lexicographic members).
void select_best(CVResult& result) {
    for (const auto& s : result.table) {
        if (is_missing(s.mean_r2)) continue;
        bool better = false;
        if (!result.best) {
            better = true;
        } else if (s.mean_r2 != result.best_mean_r2) {
            better = s.mean_r2 > result.best_mean_r2;
        } else if (s.lag != result.best->lag) {
            better = s.lag < result.best->lag;
        } else {
            better = set_less(s.subset, result.best->subset);
        }
        if (better) {
            result.best = ModelSpec{result.target, s.subset, s.lag};
            result.best_mean_r2 = s.mean_r2;
        }
    }
}

}  // namespace

CVResult grid_search(const BinPanel& panel, Var target, int max_lag, SubsetPolicy policy,
                     const BatchScheme& scheme, ProfileMode profile_mode,
                     const SegmentLayout& layout, int jobs) {
    if (max_lag < 1) throw ConfigError("grid_search: max_lag must be >= 1");
    if (scheme.batches.empty()) throw ConfigError("grid_search: batch scheme is empty");
    for (const auto& b : scheme.batches)
        if (b.valid_end > panel.n_days())
            throw ConfigError("grid_search: batch extends past the panel's last day");

    auto subsets = ordered_subsets(policy, target);
    size_t n_specs = 1 + (subsets.size() - 1) * static_cast<size_t>(max_lag);

    // With a full-sample profile the deseasonalized series are batch
    // independent; build them once.
    FlatSeries shared;
    const FlatSeries* shared_ptr = nullptr;
    if (profile_mode == ProfileMode::FullSample) {
        SeriesSet series;
        VarSet filter = set_with(0, target);
        for (VarSet s : subsets) filter = static_cast<VarSet>(filter | s);
        for (Var v : kAllVars)
            if (set_contains(filter, v)) {
                auto profile = seasonal_profile(panel, v);
                series[static_cast<size_t>(static_cast<int>(v))] = deseasonalize(panel, v, profile);
            }
        shared = flatten_series(series, layout);
        shared_ptr = &shared;
    }

    BatchEvaluator evaluator(panel, target, max_lag, subsets, layout, shared_ptr, n_specs);
    std::vector<BatchScores> per_batch(scheme.batches.size());
    parallel_for(scheme.batches.size(), jobs,
                 [&](size_t i) { per_batch[i] = evaluator.evaluate(scheme.batches[i]); });

    CVResult result;
    result.target = target;
    size_t n_batches = scheme.batches.size();
    for (size_t rank = 0; rank < subsets.size(); ++rank) {
        int lag_lo = rank == 0 ? 0 : 1;
        int lag_hi = rank == 0 ? 0 : max_lag;
        for (int lag = lag_lo; lag <= lag_hi; ++lag) {
            size_t idx = spec_index(rank, lag, max_lag);
            SpecScore score;
            score.subset = subsets[rank];
            score.lag = lag;
            std::vector<double> r2s;
            for (size_t b = 0; b < n_batches; ++b) {
                double r2 = per_batch[b].r2[idx];
                if (!is_missing(r2)) r2s.push_back(r2);
            }
            score.n_batches_used = static_cast<int>(r2s.size());
            // A spec must score on every batch to be eligible.
            if (r2s.size() == n_batches) {
                score.mean_r2 = stats::mean(r2s);
                score.std_r2 = stats::stddev(r2s);
            }
            result.table.push_back(score);
        }
    }
    select_best(result);
    return result;
}

void write_scores_csv(std::ostream& out, const CVResult& result) {
    csv::Writer w(out, kScoresHeader);
    for (const auto& s : result.table)
        w.row({set_label(s.subset), csv::format_int(s.lag), csv::format_double(s.mean_r2),
               csv::format_double(s.std_r2), csv::format_int(s.n_batches_used)});
}

CVResult read_scores_csv(std::istream& in, Var target, std::string name) {
    csv::Reader reader(in, kScoresHeader, name);
    CVResult result;
    result.target = target;
    std::vector<std::string_view> f;
    while (reader.next_row(f)) {
        SpecScore s;
        s.subset = set_from_label(f[0]);
        s.lag = static_cast<int>(csv::parse_int(f[1], reader.line()));
        s.mean_r2 = csv::parse_double(f[2], reader.line());
        s.std_r2 = csv::parse_double(f[3], reader.line());
        s.n_batches_used = static_cast<int>(csv::parse_int(f[4], reader.line()));
        result.table.push_back(s);
    }
    select_best(result);
    return result;
}

}  // namespace liq
