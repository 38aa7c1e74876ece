#include "liq/causality.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Dense>

#include "liq/csv.hpp"
#include "liq/errors.hpp"
#include "liq/parallel.hpp"
#include "liq/stats.hpp"

namespace liq {

std::string_view granger_mode_name(GrangerMode mode) {
    return mode == GrangerMode::JointUpToLag ? "joint" : "single-lag";
}

GrangerMode granger_mode_from_name(std::string_view name) {
    if (name == "joint") return GrangerMode::JointUpToLag;
    if (name == "single-lag") return GrangerMode::SingleLag;
    throw ConfigError("unknown test mode '" + std::string(name) +
                      "' (expected joint or single-lag)");
}

namespace {

// Residual sum of squares of the least-squares projection of y onto selected
// columns of X. Rank deficiency is benign: the projection target is the column
// span, so redundant columns change nothing.
double projection_ssr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const std::vector<Eigen::Index>& cols) {
    Eigen::MatrixXd sub(x.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = x.col(cols[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    Eigen::VectorXd beta = qr.solve(y);
    return (y - sub * beta).squaredNorm();
}

}  // namespace

GrangerResult granger_test(const FlatSeries& flat, Var effect, Var cause, int lag, double alpha,
                           GrangerMode mode) {
    if (lag < 1) throw ConfigError("granger_test: lag must be >= 1");
    if (effect == cause) throw ConfigError("granger_test: cause and effect must differ");
    VarSet both = set_with(set_with(0, effect), cause);
    // One design holds every column; restricted/unrestricted pick subsets so
    // both models see identical rows.
    Design d = build_design(flat, effect, both, lag, 0, flat.n_days(), both, lag);
    auto n = d.X.rows();
    int dof = mode == GrangerMode::JointUpToLag ? lag : 1;
    // Unrestricted column count: const + effect lags + cause block.
    if (n < static_cast<Eigen::Index>(lag + dof + 1 + 10))
        throw FitError("granger_test: " + std::to_string(n) + " usable rows, need at least " +
                       std::to_string(lag + dof + 11));

    // Columns are variable-major in canonical order; locate each block.
    Eigen::Index effect_block = 1, cause_block = 1;
    if (static_cast<int>(effect) < static_cast<int>(cause))
        cause_block = 1 + lag;
    else
        effect_block = 1 + lag;
    std::vector<Eigen::Index> restricted{0}, unrestricted{0};
    for (int i = 0; i < lag; ++i) {
        restricted.push_back(effect_block + i);
        unrestricted.push_back(effect_block + i);
    }
    if (mode == GrangerMode::JointUpToLag) {
        for (int i = 0; i < lag; ++i) unrestricted.push_back(cause_block + i);
    } else {
        unrestricted.push_back(cause_block + lag - 1);
    }

    double ssr_r = projection_ssr(d.X, d.y, restricted);
    double ssr_u = projection_ssr(d.X, d.y, unrestricted);

    GrangerResult r;
    r.cause = cause;
    r.effect = effect;
    r.lag = lag;
    r.dof = dof;
    if (!(ssr_u > 0)) {
        r.degenerate = true;
        return r;
    }
    r.statistic = static_cast<double>(n) * std::max(0.0, ssr_r - ssr_u) / ssr_u;
    r.p_value = stats::chi2_sf(r.statistic, static_cast<double>(r.dof));
    r.reject = r.p_value < alpha;
    return r;
}

GrangerResult granger_test(const SeriesSet& series, Var effect, Var cause, int lag, double alpha,
                           GrangerMode mode, const SegmentLayout& layout) {
    return granger_test(flatten_series(series, layout), effect, cause, lag, alpha, mode);
}

std::vector<GrangerResult> granger_grid(const SeriesSet& series, int max_lag, double alpha,
                                        GrangerMode mode, const SegmentLayout& layout, int jobs) {
    if (max_lag < 1) throw ConfigError("granger_grid: max_lag must be >= 1");
    FlatSeries flat = flatten_series(series, layout);
    struct Cell {
        Var cause, effect;
        int lag;
    };
    std::vector<Cell> cells;
    for (Var cause : kAllVars) {
        if (flat.x[static_cast<size_t>(static_cast<int>(cause))].empty()) continue;
        for (Var effect : kAllVars) {
            if (effect == cause) continue;
            if (flat.x[static_cast<size_t>(static_cast<int>(effect))].empty()) continue;
            for (int lag = 1; lag <= max_lag; ++lag) cells.push_back({cause, effect, lag});
        }
    }
    std::vector<GrangerResult> results(cells.size());
    parallel_for(cells.size(), jobs, [&](size_t i) {
        const Cell& c = cells[i];
        try {
            results[i] = granger_test(flat, c.effect, c.cause, c.lag, alpha, mode);
        } catch (const Error&) {
            GrangerResult r;  // missing statistic marks the failed cell
            r.cause = c.cause;
            r.effect = c.effect;
            r.lag = c.lag;
            r.dof = mode == GrangerMode::JointUpToLag ? c.lag : 1;
            results[i] = r;
        }
    });
    return results;
}

LaggedCorrelationTable lagged_correlations(const SeriesSet& series, int max_lag,
                                           const SegmentLayout& layout) {
    if (max_lag < 0) throw ConfigError("lagged_correlations: max_lag must be >= 0");
    FlatSeries flat = flatten_series(series, layout);
    LaggedCorrelationTable table;
    table.max_lag = max_lag;
    for (Var u : kAllVars) {
        const auto& xu = flat.x[static_cast<size_t>(static_cast<int>(u))];
        for (Var v : kAllVars) {
            const auto& xv = flat.x[static_cast<size_t>(static_cast<int>(v))];
            auto& dest = table.corr[static_cast<size_t>(static_cast<int>(u))]
                                  [static_cast<size_t>(static_cast<int>(v))];
            dest.assign(static_cast<size_t>(max_lag) + 1, missing_value());
            if (xu.empty() || xv.empty()) continue;
            for (int k = 0; k <= max_lag; ++k) {
                std::vector<double> a, b;
                for (size_t t = static_cast<size_t>(k); t < flat.size(); ++t) {
                    size_t s = t - static_cast<size_t>(k);
                    if (flat.seg[t] != flat.seg[s]) continue;
                    if (is_missing(xu[t]) || is_missing(xv[s])) continue;
                    a.push_back(xu[t]);
                    b.push_back(xv[s]);
                }
                double rho = (u == v && k == 0 && !a.empty()) ? 1.0 : stats::pearson(a, b);
                dest[static_cast<size_t>(k)] = rho;
            }
        }
    }
    return table;
}

std::vector<GrangerSummaryRow> summarize_granger(
    const std::vector<std::vector<GrangerResult>>& per_stock) {
    std::vector<GrangerSummaryRow> rows;
    // Collect the cell keys present anywhere, in canonical order.
    std::vector<std::tuple<int, int, int>> keys;
    for (const auto& stock : per_stock)
        for (const auto& r : stock)
            keys.emplace_back(static_cast<int>(r.cause), static_cast<int>(r.effect), r.lag);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (const auto& [cause, effect, lag] : keys) {
        GrangerSummaryRow row;
        row.cause = static_cast<Var>(cause);
        row.effect = static_cast<Var>(effect);
        row.lag = lag;
        int n = 0, rejected = 0;
        for (const auto& stock : per_stock)
            for (const auto& r : stock) {
                if (static_cast<int>(r.cause) != cause || static_cast<int>(r.effect) != effect ||
                    r.lag != lag)
                    continue;
                if (is_missing(r.p_value)) continue;
                ++n;
                if (r.reject) ++rejected;
            }
        row.n_stocks = n;
        if (n > 0) row.prop_rejected = static_cast<double>(rejected) / n;
        rows.push_back(row);
    }
    return rows;
}

void write_granger_csv(std::ostream& out, const std::vector<GrangerResult>& results) {
    csv::Writer w(out, kGrangerHeader);
    for (const auto& r : results)
        w.row({std::string(var_name(r.cause)), std::string(var_name(r.effect)),
               csv::format_int(r.lag), csv::format_double(r.statistic), csv::format_int(r.dof),
               csv::format_double(r.p_value), r.reject ? "1" : "0"});
}

std::vector<GrangerResult> read_granger_csv(std::istream& in, std::string name) {
    csv::Reader reader(in, kGrangerHeader, name);
    std::vector<GrangerResult> out;
    std::vector<std::string_view> f;
    while (reader.next_row(f)) {
        GrangerResult r;
        r.cause = var_from_name(f[0]);
        r.effect = var_from_name(f[1]);
        r.lag = static_cast<int>(csv::parse_int(f[2], reader.line()));
        r.statistic = csv::parse_double(f[3], reader.line());
        r.dof = static_cast<int>(csv::parse_int(f[4], reader.line()));
        r.p_value = csv::parse_double(f[5], reader.line());
        r.reject = csv::parse_int(f[6], reader.line()) != 0;
        r.degenerate = false;
        out.push_back(r);
    }
    return out;
}

void write_granger_summary_csv(std::ostream& out, const std::vector<GrangerSummaryRow>& rows) {
    csv::Writer w(out, kGrangerSummaryHeader);
    for (const auto& r : rows)
        w.row({std::string(var_symbol(r.cause)) + "->" + std::string(var_symbol(r.effect)),
               csv::format_int(r.lag), csv::format_double(r.prop_rejected),
               csv::format_int(r.n_stocks)});
}

void write_correlations_csv(std::ostream& out, const LaggedCorrelationTable& table) {
    csv::Writer w(out, kCorrelationsHeader);
    for (Var u : kAllVars)
        for (Var v : kAllVars)
            for (int k = 0; k <= table.max_lag; ++k)
                w.row({std::string(var_name(u)), std::string(var_name(v)), csv::format_int(k),
                       csv::format_double(table.corr[static_cast<size_t>(static_cast<int>(u))]
                                                    [static_cast<size_t>(static_cast<int>(v))]
                                                    [static_cast<size_t>(k)])});
}

}  // namespace liq
