#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "liq/errors.hpp"

namespace liq {

// One transaction. Timestamps are integer nanoseconds since epoch; files are
// required to be non-decreasing in timestamp.
struct TradeEvent {
    int64_t timestamp = 0;
    double price = 0;     // > 0
    double quantity = 0;  // > 0

    bool operator==(const TradeEvent&) const = default;
};

// One level-1 quote update.
struct QuoteEvent {
    int64_t timestamp = 0;
    double bid = 0;       // > 0
    double ask = 0;       // >= bid
    double bid_size = 0;  // >= 0
    double ask_size = 0;  // >= 0

    bool operator==(const QuoteEvent&) const = default;
};

// A trade together with the last quote strictly before it.
struct EnrichedTrade {
    TradeEvent trade;
    QuoteEvent prev_quote;

    bool operator==(const EnrichedTrade&) const = default;
};

inline constexpr std::string_view kTradesHeader = "timestamp_ns,price,quantity";
inline constexpr std::string_view kQuotesHeader = "timestamp_ns,bid,ask,bid_size,ask_size";
inline constexpr std::string_view kEnrichedHeader =
    "timestamp_ns,price,quantity,bid,ask,bid_size,ask_size";

// Parsers validate field signs, quote ordering (ask >= bid) and timestamp
// monotonicity, throwing ValidationError with the first offending line.
std::vector<TradeEvent> parse_trades(std::istream& in, std::string name = "trades");
std::vector<QuoteEvent> parse_quotes(std::istream& in, std::string name = "quotes");

// Combined pre-enriched format: quote columns hold the prevailing pre-trade
// state. The quote timestamp is not part of the format; it is reconstructed as
// trade.timestamp - 1 ns so the strict-precedence invariant holds.
std::vector<EnrichedTrade> parse_enriched(std::istream& in, std::string name = "ticks");

void write_trades(std::ostream& out, const std::vector<TradeEvent>& trades);
void write_quotes(std::ostream& out, const std::vector<QuoteEvent>& quotes);
void write_enriched(std::ostream& out, const std::vector<EnrichedTrade>& ticks);

// Pairs each trade with the latest quote whose timestamp is strictly earlier.
// Trades before the first quote are dropped; *n_dropped (if non-null) receives
// the count. Both inputs must be timestamp-sorted.
std::vector<EnrichedTrade> attach_prevailing_quote(const std::vector<TradeEvent>& trades,
                                                   const std::vector<QuoteEvent>& quotes,
                                                   size_t* n_dropped = nullptr);

}  // namespace liq
