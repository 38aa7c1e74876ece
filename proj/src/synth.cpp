#include "liq/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>

#include <json.hpp>

#include "liq/errors.hpp"

namespace liq {

int SynthSpec::max_lag() const {
    size_t p = 0;
    for (const auto& row : coef)
        for (const auto& c : row) p = std::max(p, c.size());
    return static_cast<int>(p);
}

void SynthSpec::validate() const {
    market.validate();
    if (n_days == 0) throw ConfigError("synth: n_days must be positive");
    if (!(tick_size > 0)) throw ConfigError("synth: tick_size must be positive");
    size_t n_slots = static_cast<size_t>(market.bins_per_day());
    for (Var v : kAllVars) {
        const auto& prof = profile[static_cast<size_t>(static_cast<int>(v))];
        if (prof.empty()) continue;  // treated as a flat profile of ones
        if (prof.size() != n_slots)
            throw ConfigError(std::string("synth: profile for ") + std::string(var_name(v)) +
                              " has " + std::to_string(prof.size()) + " slots, market needs " +
                              std::to_string(n_slots));
        for (double x : prof)
            if (!(x > 0))
                throw ConfigError(std::string("synth: profile for ") + std::string(var_name(v)) +
                                  " must be strictly positive");
    }
    if ((innovation_cov - innovation_cov.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw ConfigError("synth: innovation covariance must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(innovation_cov);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw ConfigError("synth: innovation covariance must be positive semi-definite");

    int p = max_lag();
    if (p == 0) return;
    // Companion form of the 4-variable VAR(p); stability = spectral radius < 1.
    int m = kNumVars * p;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
    for (int tgt = 0; tgt < kNumVars; ++tgt)
        for (int src = 0; src < kNumVars; ++src) {
            const auto& cs = coef[static_cast<size_t>(tgt)][static_cast<size_t>(src)];
            for (size_t i = 0; i < cs.size(); ++i)
                companion(tgt, static_cast<int>(i) * kNumVars + src) = cs[i];
        }
    for (int i = kNumVars; i < m; ++i) companion(i, i - kNumVars) = 1.0;
    double radius = companion.eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0))
        throw ConfigError("synth: unstable model, companion spectral radius " +
                          std::to_string(radius));
}

SeriesSet simulate_var(const SynthSpec& spec) {
    spec.validate();
    int n_slots = spec.market.bins_per_day();
    int p = spec.max_lag();
    size_t burn = std::max<size_t>(10 * static_cast<size_t>(p), p == 0 ? 0 : 100);
    size_t total = burn + spec.n_days * static_cast<size_t>(n_slots);

    // Symmetric square root of the innovation covariance (tolerates singular).
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(spec.innovation_cov);
    Eigen::Vector4d lambda = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::Matrix4d chol =
        es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::array<std::vector<double>, kNumVars> path;
    for (auto& v : path) v.assign(total, 0.0);
    Eigen::Vector4d eta, eps;
    for (size_t t = 0; t < total; ++t) {
        for (int v = 0; v < kNumVars; ++v) eta(v) = gauss(rng);
        eps = chol * eta;
        for (int tgt = 0; tgt < kNumVars; ++tgt) {
            double acc = eps(tgt);
            for (int src = 0; src < kNumVars; ++src) {
                const auto& cs = spec.coef[static_cast<size_t>(tgt)][static_cast<size_t>(src)];
                for (size_t i = 0; i < cs.size(); ++i)
                    if (t > i) acc += cs[i] * path[static_cast<size_t>(src)][t - i - 1];
            }
            path[static_cast<size_t>(tgt)][t] = acc;
        }
    }

    SeriesSet out;
    for (int v = 0; v < kNumVars; ++v) {
        PanelSeries& s = out[static_cast<size_t>(v)];
        s.variable = static_cast<Var>(v);
        s.days.reserve(spec.n_days);
        s.values.reserve(spec.n_days);
        size_t idx = burn;
        for (size_t d = 0; d < spec.n_days; ++d) {
            s.days.push_back(kSynthFirstDay + static_cast<Date>(d));
            s.values.emplace_back(path[static_cast<size_t>(v)].begin() +
                                      static_cast<std::ptrdiff_t>(idx),
                                  path[static_cast<size_t>(v)].begin() +
                                      static_cast<std::ptrdiff_t>(idx + static_cast<size_t>(n_slots)));
            idx += static_cast<size_t>(n_slots);
        }
    }
    return out;
}

BinPanel synthesize_panel(const SynthSpec& spec) {
    SeriesSet y = simulate_var(spec);
    int n_slots = spec.market.bins_per_day();
    BinPanel panel;
    panel.stock_id = spec.stock_id;
    panel.market = spec.market;
    panel.tick_size = spec.tick_size;
    constexpr double base_price = 100.0;
    auto prof = [&](Var v, int slot) {
        const auto& row = spec.profile[static_cast<size_t>(static_cast<int>(v))];
        return row.empty() ? 1.0 : row[static_cast<size_t>(slot)];
    };
    for (size_t d = 0; d < spec.n_days; ++d) {
        panel.days.push_back(kSynthFirstDay + static_cast<Date>(d));
        std::vector<Bin> row(static_cast<size_t>(n_slots));
        for (int s = 0; s < n_slots; ++s) {
            Bin& b = row[static_cast<size_t>(s)];
            b.day = panel.days.back();
            b.slot = s;
            auto val = [&](Var v) {
                return prof(v, s) *
                       std::exp(y[static_cast<size_t>(static_cast<int>(v))].values[d]
                                 [static_cast<size_t>(s)]);
            };
            double vol = val(Var::Volatility);
            // Price geometry chosen so the Garman-Klass formula returns `vol`
            // exactly: open = close kills the second term, and the high/low
            // half-range r/2 satisfies log(h/l)^2 / 2 = vol.
            double r = std::sqrt(2.0 * vol);
            b.open = base_price;
            b.close = base_price;
            b.high = base_price * std::exp(r / 2.0);
            b.low = base_price * std::exp(-r / 2.0);
            b.volatility = vol;
            b.spread = val(Var::Spread);
            b.spread_ticks = b.spread / spec.tick_size;
            b.book_size = val(Var::Book);
            b.traded_value = val(Var::Turnover);
            b.n_trades = 1;
        }
        panel.grid.push_back(std::move(row));
    }
    return panel;
}

std::vector<EnrichedTrade> simulate_gbm_ticks(double sigma2_per_bin, int trades_per_bin,
                                              size_t n_days, const MarketConfig& market,
                                              uint64_t seed, double start_price,
                                              double quote_spread, Date first_day) {
    market.validate();
    if (!(sigma2_per_bin >= 0)) throw ConfigError("simulate_gbm_ticks: sigma2 must be >= 0");
    if (trades_per_bin < 4)
        throw ConfigError("simulate_gbm_ticks: need at least 4 trades per bin");
    if (!(start_price > 0) || !(start_price > quote_spread / 2))
        throw ConfigError("simulate_gbm_ticks: start price must exceed half the quote spread");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    int n_slots = market.bins_per_day();
    int m = trades_per_bin - 2;  // uniform-time trades; the other two carry extremes
    double sigma = std::sqrt(sigma2_per_bin);
    double x = std::log(start_price);

    std::vector<EnrichedTrade> out;
    out.reserve(n_days * static_cast<size_t>(n_slots) * static_cast<size_t>(trades_per_bin));
    std::vector<double> times(static_cast<size_t>(m));
    std::vector<std::pair<double, double>> ticks;  // (bin fraction, log price)
    for (size_t d = 0; d < n_days; ++d) {
        Date day = first_day + static_cast<Date>(d);
        for (int slot = 0; slot < n_slots; ++slot) {
            int64_t t0 = bin_start_ns(day, slot, market);
            for (auto& f : times) f = unif(rng);
            std::sort(times.begin(), times.end());
            ticks.clear();
            // Exact path values at the sampled times.
            double prev_f = 0.0;
            for (int j = 0; j < m; ++j) {
                double f = times[static_cast<size_t>(j)];
                x += sigma * std::sqrt(std::max(0.0, f - prev_f)) * gauss(rng);
                ticks.emplace_back(f, x);
                prev_f = f;
            }
            // Exact Brownian-bridge extremes between consecutive trades; the
            // segment attaining the bin-wide extreme contributes one extra
            // trade carrying it, so high/low match the continuous path.
            double best_max = -1e308, best_min = 1e308;
            double max_time = 0, min_time = 0;
            for (int j = 0; j + 1 < m; ++j) {
                double fa = ticks[static_cast<size_t>(j)].first;
                double fb = ticks[static_cast<size_t>(j + 1)].first;
                double a = ticks[static_cast<size_t>(j)].second;
                double b = ticks[static_cast<size_t>(j + 1)].second;
                double var = sigma2_per_bin * (fb - fa);
                double u1 = unif(rng), u2 = unif(rng);
                double dx = b - a;
                double seg_max = 0.5 * (a + b + std::sqrt(dx * dx - 2.0 * var * std::log(u1)));
                double seg_min = 0.5 * (a + b - std::sqrt(dx * dx - 2.0 * var * std::log(u2)));
                if (seg_max > best_max) {
                    best_max = seg_max;
                    max_time = 0.5 * (fa + fb);
                }
                if (seg_min < best_min) {
                    best_min = seg_min;
                    min_time = 0.5 * (fa + fb);
                }
            }
            if (max_time == min_time) {  // same segment: keep distinct instants
                double fa = max_time;
                max_time = fa - 1e-6;
                min_time = fa + 1e-6;
            }
            ticks.emplace_back(max_time, best_max);
            ticks.emplace_back(min_time, best_min);
            std::sort(ticks.begin(), ticks.end());
            double bin_ns = static_cast<double>(market.bin_length_ns);
            for (const auto& [f, logp] : ticks) {
                double p = std::exp(logp);
                EnrichedTrade e;
                e.trade.timestamp =
                    t0 + static_cast<int64_t>(std::clamp(f, 0.0, 1.0 - 1e-12) * bin_ns);
                e.trade.price = p;
                e.trade.quantity = 100.0;
                e.prev_quote.timestamp = e.trade.timestamp - 1;
                e.prev_quote.bid = p - quote_spread / 2.0;
                e.prev_quote.ask = p + quote_spread / 2.0;
                e.prev_quote.bid_size = 500.0;
                e.prev_quote.ask_size = 500.0;
                out.push_back(e);
            }
        }
    }
    // Equal rounded timestamps within a bin are fine (non-decreasing), but the
    // pairing invariant wants each quote strictly before its trade, which the
    // construction already guarantees.
    return out;
}

namespace {

int64_t parse_clock(const std::string& text, const std::string& name) {
    int h = 0, m = 0, s = 0;
    int fields = std::sscanf(text.c_str(), "%d:%d:%d", &h, &m, &s);
    if (fields < 2 || h < 0 || h > 24 || m < 0 || m > 59 || s < 0 || s > 59)
        throw ParseError(name + ": bad time of day '" + text + "' (want HH:MM[:SS])");
    return (static_cast<int64_t>(h) * 3600 + m * 60 + s) * kNsPerSec;
}

std::string format_clock(int64_t ns) {
    int64_t total_s = ns / kNsPerSec;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d", static_cast<int>(total_s / 3600),
                  static_cast<int>((total_s / 60) % 60));
    std::string out(buf);
    if (total_s % 60 != 0) {
        std::snprintf(buf, sizeof buf, ":%02d", static_cast<int>(total_s % 60));
        out += buf;
    }
    return out;
}

MarketConfig market_from_json(const nlohmann::json& j, const std::string& name) {
    if (j.is_string()) return MarketConfig::preset(j.get<std::string>());
    if (!j.is_object()) throw ParseError(name + ": market must be a preset name or an object");
    MarketConfig m;
    m.zone = j.value("zone", std::string("custom"));
    m.open_ns = parse_clock(j.at("open").get<std::string>(), name);
    m.close_ns = parse_clock(j.at("close").get<std::string>(), name);
    if (j.contains("lunch")) {
        const auto& lunch = j.at("lunch");
        if (!lunch.is_array() || lunch.size() != 2)
            throw ParseError(name + ": lunch must be a [start, end] pair");
        m.has_lunch = true;
        m.lunch_start_ns = parse_clock(lunch[0].get<std::string>(), name);
        m.lunch_end_ns = parse_clock(lunch[1].get<std::string>(), name);
    }
    if (j.contains("bin_minutes"))
        m.bin_length_ns = j.at("bin_minutes").get<int64_t>() * kNsPerMin;
    m.validate();
    return m;
}

std::vector<double> profile_from_json(const nlohmann::json& j, int n_slots,
                                      const std::string& name) {
    if (j.is_number()) return std::vector<double>(static_cast<size_t>(n_slots), j.get<double>());
    if (j.is_array()) return j.get<std::vector<double>>();
    if (j.is_object()) {
        double base = j.at("base").get<double>();
        double amp = j.value("u_amplitude", 0.0);
        std::vector<double> out(static_cast<size_t>(n_slots), base);
        if (n_slots > 1)
            for (int s = 0; s < n_slots; ++s) {
                double t = 2.0 * s / (n_slots - 1) - 1.0;  // -1 at open, +1 at close
                out[static_cast<size_t>(s)] = base * (1.0 + amp * t * t);
            }
        return out;
    }
    throw ParseError(name + ": profile entries must be a number, array, or {base, u_amplitude}");
}

}  // namespace

SynthSpec parse_synth_spec(std::istream& in, std::string name) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(name + ": " + e.what());
    }
    try {
        SynthSpec spec;
        if (j.contains("market")) spec.market = market_from_json(j.at("market"), name);
        if (j.contains("n_days")) spec.n_days = j.at("n_days").get<size_t>();
        if (j.contains("seed")) spec.seed = j.at("seed").get<uint64_t>();
        if (j.contains("tick_size")) spec.tick_size = j.at("tick_size").get<double>();
        if (j.contains("stock_id")) spec.stock_id = j.at("stock_id").get<std::string>();
        int n_slots = spec.market.bins_per_day();
        if (j.contains("profile")) {
            for (const auto& [key, value] : j.at("profile").items()) {
                Var v = var_from_name(key);
                spec.profile[static_cast<size_t>(static_cast<int>(v))] =
                    profile_from_json(value, n_slots, name);
            }
        }
        if (j.contains("model")) {
            const auto& model = j.at("model");
            for (const auto& entry : model.value("coefficients", nlohmann::json::array())) {
                Var target = var_from_name(entry.at("target").get<std::string>());
                Var source = var_from_name(entry.at("source").get<std::string>());
                int lag = entry.at("lag").get<int>();
                if (lag < 1) throw ParseError(name + ": coefficient lag must be >= 1");
                auto& cs = spec.coef[static_cast<size_t>(static_cast<int>(target))]
                                    [static_cast<size_t>(static_cast<int>(source))];
                if (cs.size() < static_cast<size_t>(lag)) cs.resize(static_cast<size_t>(lag), 0.0);
                cs[static_cast<size_t>(lag - 1)] = entry.at("value").get<double>();
            }
            if (model.contains("innovation_cov")) {
                const auto& cov = model.at("innovation_cov");
                if (cov.contains("diagonal")) {
                    auto d = cov.at("diagonal").get<std::vector<double>>();
                    if (d.size() != kNumVars)
                        throw ParseError(name + ": innovation_cov diagonal needs 4 entries");
                    spec.innovation_cov = Eigen::Vector4d(d[0], d[1], d[2], d[3]).asDiagonal();
                } else if (cov.contains("matrix")) {
                    auto rows = cov.at("matrix").get<std::vector<std::vector<double>>>();
                    if (rows.size() != kNumVars)
                        throw ParseError(name + ": innovation_cov matrix must be 4x4");
                    for (int r = 0; r < kNumVars; ++r) {
                        if (rows[static_cast<size_t>(r)].size() != kNumVars)
                            throw ParseError(name + ": innovation_cov matrix must be 4x4");
                        for (int c = 0; c < kNumVars; ++c)
                            spec.innovation_cov(r, c) =
                                rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
                    }
                } else {
                    throw ParseError(name + ": innovation_cov needs 'diagonal' or 'matrix'");
                }
            }
        }
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(name + ": " + e.what());
    }
}

void write_synth_spec(std::ostream& out, const SynthSpec& spec) {
    nlohmann::json j;
    j["n_days"] = spec.n_days;
    j["seed"] = spec.seed;
    j["tick_size"] = spec.tick_size;
    j["stock_id"] = spec.stock_id;
    nlohmann::json market;
    market["zone"] = spec.market.zone;
    market["open"] = format_clock(spec.market.open_ns);
    market["close"] = format_clock(spec.market.close_ns);
    if (spec.market.has_lunch)
        market["lunch"] = {format_clock(spec.market.lunch_start_ns),
                           format_clock(spec.market.lunch_end_ns)};
    market["bin_minutes"] = spec.market.bin_length_ns / kNsPerMin;
    j["market"] = market;
    nlohmann::json prof = nlohmann::json::object();
    for (Var v : kAllVars) {
        const auto& row = spec.profile[static_cast<size_t>(static_cast<int>(v))];
        if (!row.empty()) prof[std::string(var_name(v))] = row;
    }
    if (!prof.empty()) j["profile"] = prof;
    nlohmann::json coefs = nlohmann::json::array();
    for (Var tgt : kAllVars)
        for (Var src : kAllVars) {
            const auto& cs = spec.coef[static_cast<size_t>(static_cast<int>(tgt))]
                                      [static_cast<size_t>(static_cast<int>(src))];
            for (size_t i = 0; i < cs.size(); ++i)
                if (cs[i] != 0.0)
                    coefs.push_back({{"target", std::string(var_name(tgt))},
                                     {"source", std::string(var_name(src))},
                                     {"lag", i + 1},
                                     {"value", cs[i]}});
        }
    nlohmann::json cov_rows = nlohmann::json::array();
    for (int r = 0; r < kNumVars; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < kNumVars; ++c) row.push_back(spec.innovation_cov(r, c));
        cov_rows.push_back(row);
    }
    j["model"] = {{"coefficients", coefs}, {"innovation_cov", {{"matrix", cov_rows}}}};
    out << j.dump(2) << '\n';
}

}  // namespace liq
