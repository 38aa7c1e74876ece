#include "liq/binning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "liq/csv.hpp"
#include "liq/errors.hpp"

namespace liq {

std::string_view spread_mode_name(SpreadMode mode) {
    return mode == SpreadMode::PreTradeAverage ? "pre-trade" : "bin-start";
}

SpreadMode spread_mode_from_name(std::string_view name) {
    if (name == "pre-trade") return SpreadMode::PreTradeAverage;
    if (name == "bin-start") return SpreadMode::BinStart;
    throw ConfigError("unknown spread mode '" + std::string(name) +
                      "' (expected pre-trade or bin-start)");
}

double BinPanel::value(size_t day_idx, int slot, Var v) const {
    const Bin& b = at(day_idx, slot);
    if (b.empty()) return missing_value();
    switch (v) {
        case Var::Volatility: return b.volatility;
        case Var::Spread: return b.spread;
        case Var::Book: return b.book_size;
        case Var::Turnover: return b.traded_value;
    }
    return missing_value();
}

void BinPanel::set_value(size_t day_idx, int slot, Var v, double x) {
    Bin& b = at(day_idx, slot);
    switch (v) {
        case Var::Volatility: b.volatility = x; break;
        case Var::Spread: b.spread = x; break;
        case Var::Book: b.book_size = x; break;
        case Var::Turnover: b.traded_value = x; break;
    }
}

double garman_klass(double o, double h, double l, double c) {
    if (!(l > 0) || !(l <= o && l <= c) || !(o <= h && c <= h))
        throw DomainError("garman_klass: prices must satisfy 0 < l <= o,c <= h");
    double hl = std::log(h / l);
    double co = std::log(c / o);
    return 0.5 * hl * hl - (2.0 * std::log(2.0) - 1.0) * co * co;
}

double traded_value(const std::vector<TradeEvent>& trades) {
    double sum = 0;
    for (const auto& t : trades) sum += t.price * t.quantity;
    return sum;
}

namespace {

// Quote state prevailing at an instant: last quote with timestamp <= t.
const QuoteEvent* quote_at(const std::vector<QuoteEvent>& quotes, int64_t t) {
    auto it = std::upper_bound(quotes.begin(), quotes.end(), t,
                               [](int64_t v, const QuoteEvent& q) { return v < q.timestamp; });
    if (it == quotes.begin()) return nullptr;
    return &*std::prev(it);
}

}  // namespace

BinPanel build_bins(const std::vector<EnrichedTrade>& ticks, const MarketConfig& market,
                    double tick_size, SpreadMode mode, const std::vector<QuoteEvent>* quotes,
                    std::string stock_id) {
    market.validate();
    if (!(tick_size > 0)) throw ConfigError("build_bins: tick_size must be positive");
    if (mode == SpreadMode::BinStart && quotes == nullptr)
        throw ConfigError("build_bins: bin-start spread sampling needs the quote log");

    int n_slots = market.bins_per_day();
    // Group in-session ticks by (day, slot); map keys give day ordering.
    std::map<Date, std::vector<std::vector<const EnrichedTrade*>>> by_day;
    for (const auto& e : ticks) {
        auto ds = assign_bin(e.trade.timestamp, market);
        if (!ds) continue;
        auto& rows = by_day[ds->first];
        if (rows.empty()) rows.resize(static_cast<size_t>(n_slots));
        rows[static_cast<size_t>(ds->second)].push_back(&e);
    }

    BinPanel panel;
    panel.stock_id = std::move(stock_id);
    panel.market = market;
    panel.tick_size = tick_size;
    panel.days.reserve(by_day.size());
    panel.grid.reserve(by_day.size());
    for (auto& [day, rows] : by_day) {
        panel.days.push_back(day);
        std::vector<Bin> out_row(static_cast<size_t>(n_slots));
        for (int slot = 0; slot < n_slots; ++slot) {
            Bin& b = out_row[static_cast<size_t>(slot)];
            b.day = day;
            b.slot = slot;
            const auto& in_bin = rows[static_cast<size_t>(slot)];
            if (in_bin.empty()) continue;
            b.n_trades = static_cast<int64_t>(in_bin.size());
            b.open = in_bin.front()->trade.price;
            b.close = in_bin.back()->trade.price;
            b.high = b.open;
            b.low = b.open;
            double value_sum = 0;
            double spread_sum = 0, book_sum = 0;
            for (const EnrichedTrade* e : in_bin) {
                b.high = std::max(b.high, e->trade.price);
                b.low = std::min(b.low, e->trade.price);
                value_sum += e->trade.price * e->trade.quantity;
                spread_sum += e->prev_quote.ask - e->prev_quote.bid;
                book_sum += (e->prev_quote.bid_size + e->prev_quote.ask_size) / 2.0;
            }
            b.traded_value = value_sum;
            b.volatility = garman_klass(b.open, b.high, b.low, b.close);
            if (mode == SpreadMode::PreTradeAverage) {
                b.spread = spread_sum / static_cast<double>(in_bin.size());
                b.book_size = book_sum / static_cast<double>(in_bin.size());
            } else {
                const QuoteEvent* q = quote_at(*quotes, bin_start_ns(day, slot, market));
                if (q) {
                    b.spread = q->ask - q->bid;
                    b.book_size = (q->bid_size + q->ask_size) / 2.0;
                }
            }
            if (!is_missing(b.spread)) b.spread_ticks = b.spread / tick_size;
        }
        panel.grid.push_back(std::move(out_row));
    }
    return panel;
}

void write_bins_csv(std::ostream& out, const BinPanel& panel) {
    csv::Writer w(out, kBinsHeader);
    for (size_t d = 0; d < panel.n_days(); ++d) {
        for (const Bin& b : panel.grid[d]) {
            // Empty bins serialize with all variable fields blank.
            std::string value = b.empty() ? std::string() : csv::format_double(b.traded_value);
            w.row({date_to_iso(b.day), csv::format_int(b.slot), csv::format_double(b.open),
                   csv::format_double(b.high), csv::format_double(b.low),
                   csv::format_double(b.close), value, csv::format_double(b.spread),
                   csv::format_double(b.spread_ticks), csv::format_double(b.book_size),
                   csv::format_double(b.volatility), csv::format_int(b.n_trades)});
        }
    }
}

BinPanel read_bins_csv(std::istream& in, std::optional<MarketConfig> market,
                       std::optional<double> tick_size, std::string stock_id, std::string name) {
    csv::Reader reader(in, kBinsHeader, name);
    BinPanel panel;
    panel.stock_id = std::move(stock_id);
    std::vector<std::string_view> f;
    std::vector<Bin> row;
    Date cur_day = 0;
    bool have_day = false;
    int inferred_slots = -1;
    auto flush_day = [&] {
        if (!have_day) return;
        if (inferred_slots < 0) {
            inferred_slots = static_cast<int>(row.size());
        } else if (static_cast<int>(row.size()) != inferred_slots) {
            throw ParseError(name + ": day " + date_to_iso(cur_day) + " has " +
                             std::to_string(row.size()) + " slots, expected " +
                             std::to_string(inferred_slots));
        }
        panel.days.push_back(cur_day);
        panel.grid.push_back(std::move(row));
        row.clear();
    };
    while (reader.next_row(f)) {
        Bin b;
        b.day = date_from_iso(f[0]);
        b.slot = static_cast<int>(csv::parse_int(f[1], reader.line()));
        b.open = csv::parse_double(f[2], reader.line());
        b.high = csv::parse_double(f[3], reader.line());
        b.low = csv::parse_double(f[4], reader.line());
        b.close = csv::parse_double(f[5], reader.line());
        b.traded_value = csv::parse_double(f[6], reader.line());
        b.spread = csv::parse_double(f[7], reader.line());
        b.spread_ticks = csv::parse_double(f[8], reader.line());
        b.book_size = csv::parse_double(f[9], reader.line());
        b.volatility = csv::parse_double(f[10], reader.line());
        b.n_trades = csv::parse_int(f[11], reader.line());
        if (b.n_trades == 0 && is_missing(b.traded_value)) b.traded_value = 0;
        if (!have_day || b.day != cur_day) {
            flush_day();
            cur_day = b.day;
            have_day = true;
            if (!panel.days.empty() && b.day <= panel.days.back())
                throw ParseError(name + ": days must be ascending", reader.line());
        }
        if (b.slot != static_cast<int>(row.size()))
            throw ParseError(name + ": slots must be contiguous from 0 within each day",
                             reader.line());
        row.push_back(b);
    }
    flush_day();
    int n_slots = inferred_slots < 0 ? 0 : inferred_slots;
    if (market) {
        market->validate();
        if (n_slots > 0 && market->bins_per_day() != n_slots)
            throw ValidationError(name + ": file has " + std::to_string(n_slots) +
                                  " slots per day but market " + market->zone + " expects " +
                                  std::to_string(market->bins_per_day()));
        panel.market = *market;
    } else {
        MarketConfig m;
        m.zone = "custom";
        m.open_ns = 0;
        m.close_ns = static_cast<int64_t>(std::max(n_slots, 1)) * m.bin_length_ns;
        panel.market = m;
    }
    if (tick_size) {
        panel.tick_size = *tick_size;
    } else {
        panel.tick_size = 0.01;
        for (const auto& day_row : panel.grid) {
            bool found = false;
            for (const Bin& b : day_row)
                if (b.spread > 0 && b.spread_ticks > 0) {
                    panel.tick_size = b.spread / b.spread_ticks;
                    found = true;
                    break;
                }
            if (found) break;
        }
    }
    if (!(panel.tick_size > 0)) throw ConfigError("read_bins_csv: tick_size must be positive");
    return panel;
}

}  // namespace liq
