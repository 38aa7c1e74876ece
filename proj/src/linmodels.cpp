#include "liq/linmodels.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "liq/errors.hpp"

namespace liq {

FlatSeries flatten_series(const SeriesSet& series, const SegmentLayout& layout) {
    FlatSeries flat;
    // All populated variables must agree on the panel shape.
    const PanelSeries* ref = nullptr;
    for (const auto& s : series) {
        if (s.n_days() == 0) continue;
        if (!ref) {
            ref = &s;
        } else if (s.days != ref->days || s.n_slots() != ref->n_slots()) {
            throw ValidationError("flatten_series: variables disagree on panel shape");
        }
    }
    if (!ref) return flat;
    size_t n_days = ref->n_days();
    int n_slots = ref->n_slots();
    flat.n_slots = n_slots;
    size_t total = n_days * static_cast<size_t>(n_slots);
    for (int v = 0; v < kNumVars; ++v) {
        const auto& s = series[static_cast<size_t>(v)];
        if (s.n_days() == 0) continue;
        auto& xs = flat.x[static_cast<size_t>(v)];
        xs.reserve(total);
        for (const auto& row : s.values) xs.insert(xs.end(), row.begin(), row.end());
    }
    flat.seg.resize(total);
    flat.day_begin.resize(n_days + 1);
    int32_t seg = -1;
    size_t idx = 0;
    bool split_lunch = !layout.cross_breaks && layout.morning_bins > 0 &&
                       layout.morning_bins < n_slots;
    for (size_t d = 0; d < n_days; ++d) {
        flat.day_begin[d] = idx;
        for (int s = 0; s < n_slots; ++s, ++idx) {
            bool new_seg = (s == 0 && (!layout.cross_days || seg < 0)) ||
                           (split_lunch && s == layout.morning_bins);
            if (new_seg) ++seg;
            flat.seg[idx] = seg;
        }
    }
    flat.day_begin[n_days] = idx;
    return flat;
}

namespace {

std::vector<Var> subset_members(VarSet subset) {
    std::vector<Var> out;
    for (Var v : kAllVars)
        if (set_contains(subset, v)) out.push_back(v);
    return out;
}

// Flattened indices of usable rows: target present, and for every variable in
// `filter` the most recent `burn` lags present within the row's segment.
std::vector<size_t> usable_rows(const FlatSeries& flat, Var target, VarSet filter, int burn,
                                size_t day_begin, size_t day_end) {
    if (day_begin >= day_end || day_end > flat.n_days())
        throw ValidationError("usable_rows: bad day range");
    const auto& yt = flat.x[static_cast<size_t>(static_cast<int>(target))];
    if (yt.empty()) throw ValidationError("usable_rows: target series is empty");
    auto members = subset_members(filter);
    for (Var v : members)
        if (flat.x[static_cast<size_t>(static_cast<int>(v))].empty())
            throw ValidationError(std::string("usable_rows: series for ") +
                                  std::string(var_name(v)) + " is empty");

    size_t lo = flat.day_begin[day_begin], hi = flat.day_begin[day_end];
    std::vector<size_t> rows;
    if (burn == 0) {
        for (size_t t = lo; t < hi; ++t)
            if (!is_missing(yt[t])) rows.push_back(t);
        return rows;
    }
    // run[t] = consecutive filter-complete elements ending at t inside one segment.
    std::vector<int> run(flat.size(), 0);
    for (size_t t = 0; t < flat.size(); ++t) {
        bool ok = true;
        for (Var v : members)
            if (is_missing(flat.x[static_cast<size_t>(static_cast<int>(v))][t])) {
                ok = false;
                break;
            }
        if (!ok) continue;
        run[t] = (t > 0 && flat.seg[t - 1] == flat.seg[t]) ? run[t - 1] + 1 : 1;
    }
    for (size_t t = lo; t < hi; ++t) {
        if (is_missing(yt[t])) continue;
        int depth = (t > 0 && flat.seg[t - 1] == flat.seg[t]) ? run[t - 1] : 0;
        if (depth >= burn) rows.push_back(t);
    }
    return rows;
}

}  // namespace

Design build_design(const FlatSeries& flat, Var target, VarSet subset, int lag,
                    size_t day_begin, size_t day_end, VarSet row_filter, int burn) {
    if (lag < 0 || (subset != 0 && lag < 1))
        throw ValidationError("build_design: lag must be >= 1 for a non-empty subset");
    if (burn < 0) burn = lag;
    if (burn < lag) throw ValidationError("build_design: burn must be >= lag");
    auto rows = usable_rows(flat, target, static_cast<VarSet>(subset | row_filter), burn,
                            day_begin, day_end);
    auto members = subset_members(subset);
    size_t k = members.size() * static_cast<size_t>(lag);
    Design d;
    d.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(k + 1));
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    d.col_names.push_back("const");
    for (Var v : members)
        for (int i = 1; i <= lag; ++i)
            d.col_names.push_back(std::string(var_symbol(v)) + "[-" + std::to_string(i) + "]");
    const auto& yt = flat.x[static_cast<size_t>(static_cast<int>(target))];
    for (size_t r = 0; r < rows.size(); ++r) {
        size_t t = rows[r];
        auto ri = static_cast<Eigen::Index>(r);
        d.X(ri, 0) = 1.0;
        Eigen::Index c = 1;
        for (Var v : members) {
            const auto& xs = flat.x[static_cast<size_t>(static_cast<int>(v))];
            for (int i = 1; i <= lag; ++i) d.X(ri, c++) = xs[t - static_cast<size_t>(i)];
        }
        d.y(ri) = yt[t];
    }
    return d;
}

namespace {

FittedModel fit_design(const Design& d, const ModelSpec& spec) {
    auto n = d.X.rows();
    auto cols = d.X.cols();
    if (n < cols + 10)
        throw FitError("fit_linear: " + std::to_string(n) + " usable rows, need at least " +
                       std::to_string(cols + 10));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
    if (qr.rank() < cols) {
        // The permutation sorts dependent columns last; name them.
        std::string names;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index i = qr.rank(); i < cols; ++i) {
            if (!names.empty()) names += ", ";
            names += d.col_names[static_cast<size_t>(perm(i))];
        }
        throw FitError("fit_linear: rank-deficient design, collinear columns: " + names);
    }
    Eigen::VectorXd beta = qr.solve(d.y);
    Eigen::VectorXd resid = d.y - d.X * beta;
    FittedModel m;
    m.spec = spec;
    m.intercept = beta(0);
    m.coef.assign(beta.data() + 1, beta.data() + cols);
    m.residual_variance = resid.squaredNorm() / static_cast<double>(n);
    m.n_obs = static_cast<size_t>(n);
    return m;
}

}  // namespace

FittedModel fit_linear(const FlatSeries& flat, const ModelSpec& spec, size_t day_begin,
                       size_t day_end, VarSet row_filter, int burn) {
    Design d = build_design(flat, spec.target, spec.subset, spec.lag, day_begin, day_end,
                            row_filter, burn);
    return fit_design(d, spec);
}

FittedModel fit_linear(const SeriesSet& series, const ModelSpec& spec, size_t day_begin,
                       size_t day_end, const SegmentLayout& layout) {
    return fit_linear(flatten_series(series, layout), spec, day_begin, day_end);
}

double predict_one_step(const FittedModel& model, const std::vector<double>& window) {
    if (window.size() != model.coef.size())
        throw ValidationError("predict_one_step: window has " + std::to_string(window.size()) +
                              " values, model expects " + std::to_string(model.coef.size()));
    double acc = model.intercept;
    for (size_t i = 0; i < window.size(); ++i) {
        if (!std::isfinite(window[i]))
            throw ValidationError("predict_one_step: incomplete lag window");
        acc += model.coef[i] * window[i];
    }
    return acc;
}

double r2_out_of_sample(const FittedModel& model, const FlatSeries& flat, size_t day_begin,
                        size_t day_end, VarSet row_filter, int burn) {
    Design d = build_design(flat, model.spec.target, model.spec.subset, model.spec.lag, day_begin,
                            day_end, row_filter, burn);
    auto n = d.X.rows();
    if (n == 0) return missing_value();
    Eigen::VectorXd beta(d.X.cols());
    beta(0) = model.intercept;
    for (size_t i = 0; i < model.coef.size(); ++i)
        beta(static_cast<Eigen::Index>(i + 1)) = model.coef[i];
    Eigen::VectorXd err = d.y - d.X * beta;
    double mean_y = d.y.mean();
    double var_y = (d.y.array() - mean_y).square().sum() / static_cast<double>(n);
    if (!(var_y > 0)) return missing_value();
    double mean_e = err.mean();
    double var_e = (err.array() - mean_e).square().sum() / static_cast<double>(n);
    return 1.0 - var_e / var_y;
}

double r2_out_of_sample(const FittedModel& model, const SeriesSet& series, size_t day_begin,
                        size_t day_end, const SegmentLayout& layout) {
    return r2_out_of_sample(model, flatten_series(series, layout), day_begin, day_end);
}

void write_model_record(std::ostream& out, const FittedModel& model) {
    nlohmann::json j{{"target", var_name(model.spec.target)},
                     {"subset", set_label(model.spec.subset)},
                     {"lag", model.spec.lag},
                     {"intercept", model.intercept},
                     {"coef", model.coef},
                     {"residual_variance", model.residual_variance},
                     {"n_obs", model.n_obs}};
    out << j.dump() << '\n';
}

FittedModel parse_model_record(const std::string& line) {
    try {
        nlohmann::json j = nlohmann::json::parse(line);
        FittedModel m;
        m.spec.target = var_from_name(j.at("target").get<std::string>());
        m.spec.subset = set_from_label(j.at("subset").get<std::string>());
        m.spec.lag = j.at("lag").get<int>();
        m.intercept = j.at("intercept").get<double>();
        m.coef = j.at("coef").get<std::vector<double>>();
        m.residual_variance = j.at("residual_variance").get<double>();
        m.n_obs = j.at("n_obs").get<size_t>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model record: ") + e.what());
    }
}

}  // namespace liq
