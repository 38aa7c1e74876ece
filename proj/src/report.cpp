#include "liq/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "liq/csv.hpp"
#include "liq/errors.hpp"
#include "liq/stats.hpp"

namespace liq {

namespace {

size_t vi(Var v) { return static_cast<size_t>(static_cast<int>(v)); }

double json_number(const nlohmann::json& j) {
    return j.is_null() ? missing_value() : j.get<double>();
}

nlohmann::json json_of(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

DescriptiveStats descriptive_stats(const BinPanel& panel) {
    std::vector<double> bp, ticks, book, turnover;
    for (const auto& day : panel.grid)
        for (const Bin& b : day) {
            if (b.empty()) continue;
            turnover.push_back(b.traded_value);
            if (std::isfinite(b.spread) && std::isfinite(b.close) && b.close > 0)
                bp.push_back(b.spread / b.close * 1e4);
            if (std::isfinite(b.spread_ticks)) ticks.push_back(b.spread_ticks);
            if (std::isfinite(b.book_size)) book.push_back(b.book_size);
        }
    DescriptiveStats d;
    d.avg_spread_bp = stats::mean(bp);
    d.avg_spread_ticks = stats::mean(ticks);
    d.avg_book_size = stats::mean(book);
    d.avg_turnover = stats::mean(turnover);
    return d;
}

namespace {

nlohmann::json score_to_json(const std::optional<SpecScore>& score) {
    if (!score) return nullptr;
    return {{"subset", std::string(set_label(score->subset))},
            {"lag", score->lag},
            {"mean_r2", json_of(score->mean_r2)},
            {"std_r2", json_of(score->std_r2)},
            {"n_batches_used", score->n_batches_used}};
}

std::optional<SpecScore> score_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    SpecScore s;
    s.subset = set_from_label(j.at("subset").get<std::string>());
    s.lag = j.at("lag").get<int>();
    s.mean_r2 = json_number(j.at("mean_r2"));
    s.std_r2 = json_number(j.at("std_r2"));
    s.n_batches_used = j.at("n_batches_used").get<int>();
    return s;
}

}  // namespace

void write_stock_record(std::ostream& out, const StockRecord& record) {
    nlohmann::json results = nlohmann::json::array();
    for (Var v : kAllVars)
        results.push_back({{"variable", std::string(var_name(v))},
                           {"best_ar", score_to_json(record.best_ar[vi(v)])},
                           {"best_var", score_to_json(record.best_var[vi(v)])},
                           {"ar_coef", record.ar_coef[vi(v)]}});
    nlohmann::json j = {
        {"stock_id", record.stock_id},
        {"zone", record.zone},
        {"descriptive",
         {{"avg_spread_bp", json_of(record.descriptive.avg_spread_bp)},
          {"avg_spread_ticks", json_of(record.descriptive.avg_spread_ticks)},
          {"avg_book_size", json_of(record.descriptive.avg_book_size)},
          {"avg_turnover", json_of(record.descriptive.avg_turnover)}}},
        {"results", results}};
    out << j.dump(2) << '\n';
}

StockRecord read_stock_record(std::istream& in, std::string name) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(name + ": " + e.what());
    }
    try {
        StockRecord r;
        r.stock_id = j.at("stock_id").get<std::string>();
        r.zone = j.at("zone").get<std::string>();
        const auto& d = j.at("descriptive");
        r.descriptive.avg_spread_bp = json_number(d.at("avg_spread_bp"));
        r.descriptive.avg_spread_ticks = json_number(d.at("avg_spread_ticks"));
        r.descriptive.avg_book_size = json_number(d.at("avg_book_size"));
        r.descriptive.avg_turnover = json_number(d.at("avg_turnover"));
        for (const auto& entry : j.at("results")) {
            Var v = var_from_name(entry.at("variable").get<std::string>());
            r.best_ar[vi(v)] = score_from_json(entry.at("best_ar"));
            r.best_var[vi(v)] = score_from_json(entry.at("best_var"));
            r.ar_coef[vi(v)] = entry.at("ar_coef").get<std::vector<double>>();
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(name + ": " + e.what());
    }
}

std::vector<StockMeta> read_metadata_csv(std::istream& in, std::string name) {
    csv::Reader reader(in, kMetadataHeader, name);
    std::vector<StockMeta> out;
    std::vector<std::string_view> fields;
    while (reader.next_row(fields)) {
        StockMeta m;
        m.stock_id = std::string(fields[0]);
        m.zone = std::string(fields[1]);
        m.market_cap = csv::parse_double(fields[2], reader.line());
        m.free_float = csv::parse_double(fields[3], reader.line());
        out.push_back(std::move(m));
    }
    return out;
}

std::string_view tick_class(double avg_spread_ticks) {
    if (!std::isfinite(avg_spread_ticks)) return "";
    if (avg_spread_ticks <= 1.3) return "large";
    if (avg_spread_ticks >= 2.0) return "small";
    return "medium";
}

double memory_lambda(const std::vector<double>& lag_coefs) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < lag_coefs.size(); ++i)
        if (std::fabs(lag_coefs[i]) > 1e-6) {
            xs.push_back(static_cast<double>(i + 1));
            ys.push_back(-std::log(std::fabs(lag_coefs[i])));
        }
    if (xs.size() < 2) return missing_value();
    double mx = stats::mean(xs), my = stats::mean(ys);
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

double memory_lambda(const FittedModel& model) {
    if (model.spec.subset != set_with(0, model.spec.target)) return missing_value();
    return memory_lambda(model.coef);
}

std::vector<double> cross_sectional_normalize(const std::vector<double>& values,
                                              const std::vector<std::string>& zones,
                                              bool center) {
    if (values.size() != zones.size())
        throw ConfigError("cross_sectional_normalize: values and zones differ in length");
    std::map<std::string, std::vector<double>> by_zone;
    for (size_t i = 0; i < values.size(); ++i)
        if (std::isfinite(values[i])) by_zone[zones[i]].push_back(values[i]);
    std::map<std::string, std::pair<double, double>> zone_stats;  // zone -> (mean, std)
    for (const auto& [zone, xs] : by_zone) {
        if (xs.size() < 2)
            throw DomainError("cross_sectional_normalize: zone '" + zone +
                              "' has fewer than two stocks with values");
        double s = stats::stddev(xs);
        if (!(s > 0))
            throw DomainError("cross_sectional_normalize: zone '" + zone +
                              "' has zero dispersion");
        zone_stats[zone] = {stats::mean(xs), s};
    }
    std::vector<double> out(values.size(), missing_value());
    for (size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) continue;
        const auto& [m, s] = zone_stats.at(zones[i]);
        out[i] = center ? (values[i] - m) / s : values[i] / s;
    }
    return out;
}

SummaryReport summarize(const std::vector<StockRecord>& records,
                        const std::vector<StockMeta>& metadata) {
    SummaryReport report;
    std::map<std::string, const StockMeta*> meta_by_id;
    for (const auto& m : metadata) meta_by_id[m.stock_id] = &m;

    for (const auto& rec : records) {
        StockSummary s;
        s.stock_id = rec.stock_id;
        s.zone = rec.zone;
        s.descriptive = rec.descriptive;
        s.tick_class = std::string(tick_class(rec.descriptive.avg_spread_ticks));
        s.best_ar = rec.best_ar;
        s.best_var = rec.best_var;
        for (Var v : kAllVars) {
            s.lambda[vi(v)] = memory_lambda(rec.ar_coef[vi(v)]);
            s.first_lag_coef[vi(v)] =
                rec.ar_coef[vi(v)].empty() ? missing_value() : rec.ar_coef[vi(v)][0];
        }
        if (auto it = meta_by_id.find(rec.stock_id); it != meta_by_id.end()) {
            s.market_cap = it->second->market_cap;
            s.free_float = it->second->free_float;
            if (!it->second->zone.empty() && it->second->zone != rec.zone)
                report.warnings.push_back("stock " + rec.stock_id + ": metadata zone '" +
                                          it->second->zone + "' differs from record zone '" +
                                          rec.zone + "'; keeping the record's");
        } else if (!metadata.empty()) {
            report.warnings.push_back("stock " + rec.stock_id +
                                      ": no metadata row; capitalization fields left blank");
        }
        report.stocks.push_back(std::move(s));
    }
    if (metadata.empty() && !records.empty())
        report.warnings.push_back(
            "no metadata provided; capitalization-based outputs will be skipped");

    std::vector<std::string> zone_order;
    std::map<std::string, std::vector<const StockSummary*>> by_zone;
    for (const auto& s : report.stocks) {
        if (!by_zone.count(s.zone)) zone_order.push_back(s.zone);
        by_zone[s.zone].push_back(&s);
    }
    for (const auto& zone : zone_order) {
        ZoneAggregate agg;
        agg.zone = zone;
        agg.n_stocks = static_cast<int>(by_zone[zone].size());
        for (Var v : kAllVars) {
            std::vector<double> ar_r2, ar_lag, var_r2, var_lag;
            for (const StockSummary* s : by_zone[zone]) {
                if (s->best_ar[vi(v)] && std::isfinite(s->best_ar[vi(v)]->mean_r2)) {
                    ar_r2.push_back(s->best_ar[vi(v)]->mean_r2);
                    ar_lag.push_back(s->best_ar[vi(v)]->lag);
                }
                if (s->best_var[vi(v)] && std::isfinite(s->best_var[vi(v)]->mean_r2)) {
                    var_r2.push_back(s->best_var[vi(v)]->mean_r2);
                    var_lag.push_back(s->best_var[vi(v)]->lag);
                }
            }
            agg.n_ar[vi(v)] = static_cast<int>(ar_r2.size());
            agg.n_var[vi(v)] = static_cast<int>(var_r2.size());
            agg.ar_r2_mean[vi(v)] = stats::mean(ar_r2);
            agg.ar_r2_std[vi(v)] = stats::stddev(ar_r2);
            agg.ar_lag_mean[vi(v)] = stats::mean(ar_lag);
            agg.var_r2_mean[vi(v)] = stats::mean(var_r2);
            agg.var_r2_std[vi(v)] = stats::stddev(var_r2);
            agg.var_lag_mean[vi(v)] = stats::mean(var_lag);
        }
        report.zones.push_back(std::move(agg));
    }
    return report;
}

QuantileCurves intraday_quantile_curves(const BinPanel& panel, Var variable) {
    QuantileCurves curves;
    curves.variable = variable;
    size_t n_slots = panel.days.empty() ? 0 : panel.grid.front().size();
    std::vector<std::vector<double>> per_slot(n_slots);
    for (size_t d = 0; d < panel.grid.size(); ++d) {
        std::vector<double> day_values(n_slots, missing_value());
        double sum = 0;
        size_t n = 0;
        for (size_t s = 0; s < n_slots; ++s) {
            double x = panel.value(d, static_cast<int>(s), variable);
            if (std::isfinite(x)) {
                day_values[s] = x;
                sum += x;
                ++n;
            }
        }
        if (n == 0) continue;
        double day_mean = sum / static_cast<double>(n);
        if (!(day_mean != 0)) continue;
        for (size_t s = 0; s < n_slots; ++s)
            if (std::isfinite(day_values[s])) per_slot[s].push_back(day_values[s] / day_mean);
    }
    curves.median.resize(n_slots, missing_value());
    curves.q25.resize(n_slots, missing_value());
    curves.q75.resize(n_slots, missing_value());
    for (size_t s = 0; s < n_slots; ++s) {
        if (per_slot[s].empty()) continue;
        curves.median[s] = stats::quantile(per_slot[s], 0.5);
        curves.q25[s] = stats::quantile(per_slot[s], 0.25);
        curves.q75[s] = stats::quantile(per_slot[s], 0.75);
    }
    return curves;
}

std::string format_mean_std(double mean_value, double std_value) {
    if (!std::isfinite(mean_value)) return "";
    if (!std::isfinite(std_value)) std_value = 0.0;
    if (std::fabs(mean_value) < 5e-4) mean_value = 0.0;  // avoid a "-0.000" cell
    if (std::fabs(std_value) < 5e-4) std_value = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f (%.3f)", mean_value, std_value);
    return buf;
}

namespace {

std::string format_lag(double lag) {
    if (!std::isfinite(lag)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", lag);
    return buf;
}

// Capitalization divided by the zone's (population) deviation, no centering;
// missing where metadata is absent or a zone lacks two capitalized stocks.
std::vector<double> scaled_caps(const SummaryReport& report) {
    std::vector<double> caps;
    std::vector<std::string> zones;
    for (const auto& s : report.stocks) {
        caps.push_back(s.market_cap);
        zones.push_back(s.zone);
    }
    std::map<std::string, std::vector<double>> by_zone;
    for (size_t i = 0; i < caps.size(); ++i)
        if (std::isfinite(caps[i])) by_zone[zones[i]].push_back(caps[i]);
    std::vector<double> out(caps.size(), missing_value());
    for (size_t i = 0; i < caps.size(); ++i) {
        if (!std::isfinite(caps[i])) continue;
        const auto& xs = by_zone[zones[i]];
        if (xs.size() < 2) continue;
        double s = stats::stddev(xs);
        if (s > 0) out[i] = caps[i] / s;
    }
    return out;
}

}  // namespace

void write_stock_summaries_csv(std::ostream& out, const SummaryReport& report) {
    csv::Writer w(out,
                  "stock_id,zone,tick_class,avg_spread_bp,avg_spread_ticks,avg_book_size,"
                  "avg_turnover,market_cap,variable,best_ar_lag,best_ar_r2,best_var_subset,"
                  "best_var_lag,best_var_r2,lambda,first_lag_coef");
    for (const auto& s : report.stocks)
        for (Var v : kAllVars) {
            const auto& ar = s.best_ar[vi(v)];
            const auto& vr = s.best_var[vi(v)];
            w.row({s.stock_id, s.zone, s.tick_class,
                   csv::format_double(s.descriptive.avg_spread_bp),
                   csv::format_double(s.descriptive.avg_spread_ticks),
                   csv::format_double(s.descriptive.avg_book_size),
                   csv::format_double(s.descriptive.avg_turnover),
                   csv::format_double(s.market_cap), std::string(var_name(v)),
                   ar ? csv::format_int(ar->lag) : "",
                   ar ? csv::format_double(ar->mean_r2) : "",
                   vr ? std::string(set_label(vr->subset)) : "",
                   vr ? csv::format_int(vr->lag) : "",
                   vr ? csv::format_double(vr->mean_r2) : "",
                   csv::format_double(s.lambda[vi(v)]),
                   csv::format_double(s.first_lag_coef[vi(v)])});
        }
}

void write_table2_csv(std::ostream& out, const SummaryReport& report) {
    csv::Writer w(out, "zone,model,n_stocks,volatility,spread,book,turnover");
    for (const auto& z : report.zones) {
        std::vector<std::string> ar_row = {z.zone, "AR", csv::format_int(z.n_stocks)};
        std::vector<std::string> var_row = {z.zone, "VAR", csv::format_int(z.n_stocks)};
        for (Var v : kAllVars) {
            ar_row.push_back(format_mean_std(z.ar_r2_mean[vi(v)], z.ar_r2_std[vi(v)]));
            var_row.push_back(format_mean_std(z.var_r2_mean[vi(v)], z.var_r2_std[vi(v)]));
        }
        w.row(ar_row);
        w.row(var_row);
    }
}

void write_table3_csv(std::ostream& out, const SummaryReport& report) {
    csv::Writer w(out, "zone,model,n_stocks,volatility,spread,book,turnover");
    for (const auto& z : report.zones) {
        std::vector<std::string> ar_row = {z.zone, "AR", csv::format_int(z.n_stocks)};
        std::vector<std::string> var_row = {z.zone, "VAR", csv::format_int(z.n_stocks)};
        for (Var v : kAllVars) {
            ar_row.push_back(format_lag(z.ar_lag_mean[vi(v)]));
            var_row.push_back(format_lag(z.var_lag_mean[vi(v)]));
        }
        w.row(ar_row);
        w.row(var_row);
    }
}

void write_scatter_spread_r2_csv(std::ostream& out, const SummaryReport& report) {
    csv::Writer w(out, "stock_id,zone,variable,avg_spread_ticks,ar_r2,var_r2");
    for (const auto& s : report.stocks)
        for (Var v : kAllVars) {
            const auto& ar = s.best_ar[vi(v)];
            const auto& vr = s.best_var[vi(v)];
            w.row({s.stock_id, s.zone, std::string(var_name(v)),
                   csv::format_double(s.descriptive.avg_spread_ticks),
                   ar ? csv::format_double(ar->mean_r2) : "",
                   vr ? csv::format_double(vr->mean_r2) : ""});
        }
}

bool write_scatter_cap_first_coef_csv(std::ostream& out, const SummaryReport& report) {
    std::vector<double> caps = scaled_caps(report);
    if (std::none_of(caps.begin(), caps.end(), [](double c) { return std::isfinite(c); }))
        return false;
    csv::Writer w(out, "stock_id,zone,variable,scaled_cap,first_lag_coef");
    for (size_t i = 0; i < report.stocks.size(); ++i) {
        if (!std::isfinite(caps[i])) continue;
        const auto& s = report.stocks[i];
        for (Var v : kAllVars)
            w.row({s.stock_id, s.zone, std::string(var_name(v)), csv::format_double(caps[i]),
                   csv::format_double(s.first_lag_coef[vi(v)])});
    }
    return true;
}

bool write_scatter_cap_lambda_csv(std::ostream& out, const SummaryReport& report) {
    std::vector<double> caps = scaled_caps(report);
    if (std::none_of(caps.begin(), caps.end(), [](double c) { return std::isfinite(c); }))
        return false;
    csv::Writer w(out, "stock_id,zone,variable,scaled_cap,lambda");
    for (size_t i = 0; i < report.stocks.size(); ++i) {
        if (!std::isfinite(caps[i])) continue;
        const auto& s = report.stocks[i];
        for (Var v : kAllVars)
            w.row({s.stock_id, s.zone, std::string(var_name(v)), csv::format_double(caps[i]),
                   csv::format_double(s.lambda[vi(v)])});
    }
    return true;
}

void write_r2_improvement_csv(std::ostream& out, const SummaryReport& report) {
    csv::Writer w(out, "zone,variable,stock_id,improvement");
    struct Row {
        std::string zone, variable, stock_id;
        double improvement;
    };
    std::vector<Row> rows;
    std::vector<std::string> zone_order;
    for (const auto& z : report.zones) zone_order.push_back(z.zone);
    for (const auto& s : report.stocks)
        for (Var v : kAllVars) {
            const auto& ar = s.best_ar[vi(v)];
            const auto& vr = s.best_var[vi(v)];
            if (!ar || !vr || !std::isfinite(ar->mean_r2) || !std::isfinite(vr->mean_r2))
                continue;
            rows.push_back({s.zone, std::string(var_name(v)), s.stock_id,
                            vr->mean_r2 - ar->mean_r2});
        }
    auto zone_rank = [&](const std::string& z) {
        return std::find(zone_order.begin(), zone_order.end(), z) - zone_order.begin();
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        if (a.zone != b.zone) return zone_rank(a.zone) < zone_rank(b.zone);
        if (a.variable != b.variable)
            return vi(var_from_name(a.variable)) < vi(var_from_name(b.variable));
        return a.improvement < b.improvement;
    });
    for (const auto& r : rows)
        w.row({r.zone, r.variable, r.stock_id, csv::format_double(r.improvement)});
}

void write_quantile_curves_csv(std::ostream& out, const std::vector<QuantileCurves>& curves) {
    csv::Writer w(out, "variable,slot,median,q25,q75");
    for (const auto& c : curves)
        for (size_t s = 0; s < c.median.size(); ++s)
            w.row({std::string(var_name(c.variable)), csv::format_int(static_cast<int64_t>(s)),
                   csv::format_double(c.median[s]), csv::format_double(c.q25[s]),
                   csv::format_double(c.q75[s])});
}

}  // namespace liq
