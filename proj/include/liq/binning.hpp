#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liq/ingest.hpp"
#include "liq/market.hpp"
#include "liq/types.hpp"

namespace liq {

// How a bin's spread and book size are sampled.
//   PreTradeAverage: mean over the bin's trades of the pre-trade quote state.
//   BinStart: the quote prevailing at the bin's opening instant (needs the
//   raw quote log).
enum class SpreadMode { PreTradeAverage, BinStart };

std::string_view spread_mode_name(SpreadMode mode);
SpreadMode spread_mode_from_name(std::string_view name);

// One 5-minute bin. Empty bins (n_trades == 0) keep day/slot but carry NaN in
// every price and variable field; traded_value is 0 in memory and serialized
// empty alongside the other variables.
struct Bin {
    Date day = 0;
    int slot = 0;
    double open = missing_value();
    double high = missing_value();
    double low = missing_value();
    double close = missing_value();
    double traded_value = 0;
    double spread = missing_value();
    double spread_ticks = missing_value();
    double book_size = missing_value();
    double volatility = missing_value();
    int64_t n_trades = 0;

    bool empty() const { return n_trades == 0; }
};

// Per-stock grid of bins: one full row of slots_per_day() bins for every day
// that has any in-session trade.
struct BinPanel {
    std::string stock_id;
    MarketConfig market;
    double tick_size = 0;
    std::vector<Date> days;               // ascending
    std::vector<std::vector<Bin>> grid;   // [day index][slot], rows all full length

    int slots_per_day() const { return market.bins_per_day(); }
    size_t n_days() const { return days.size(); }

    const Bin& at(size_t day_idx, int slot) const { return grid[day_idx][static_cast<size_t>(slot)]; }
    Bin& at(size_t day_idx, int slot) { return grid[day_idx][static_cast<size_t>(slot)]; }

    // The liquidity variable's value for one bin; NaN when missing (empty bin,
    // or a value dropped by cleaning).
    double value(size_t day_idx, int slot, Var v) const;
    void set_value(size_t day_idx, int slot, Var v, double x);
};

// Garman-Klass variance for one bin of prices:
//   ½·log²(h/l) − (2·log 2 − 1)·log²(c/o).
// Requires 0 < l <= min(o, c) and max(o, c) <= h; throws DomainError otherwise.
double garman_klass(double o, double h, double l, double c);

// Σ price·quantity over the given trades.
double traded_value(const std::vector<TradeEvent>& trades);

// Bins every in-session trade and computes all per-bin fields. Out-of-session
// trades are skipped. mode == BinStart requires the raw quote log; non-empty
// bins with no quote at or before the bin's opening instant get missing
// spread/book. Throws ConfigError if tick_size <= 0.
BinPanel build_bins(const std::vector<EnrichedTrade>& ticks, const MarketConfig& market,
                    double tick_size, SpreadMode mode = SpreadMode::PreTradeAverage,
                    const std::vector<QuoteEvent>* quotes = nullptr, std::string stock_id = {});

inline constexpr std::string_view kBinsHeader =
    "date,slot,open,high,low,close,traded_value,spread,spread_ticks,book_size,volatility,n_trades";

void write_bins_csv(std::ostream& out, const BinPanel& panel);

// Reads a bins CSV back into a panel. The slot grid (bins per day) is inferred
// from the file and must be contiguous 0..S-1 for every day; pass a market to
// enforce a specific S instead. tick_size is recovered from the first bin with
// positive spread and spread_ticks (fallback 0.01) unless supplied.
BinPanel read_bins_csv(std::istream& in, std::optional<MarketConfig> market = std::nullopt,
                       std::optional<double> tick_size = std::nullopt, std::string stock_id = {},
                       std::string name = "bins");

}  // namespace liq
