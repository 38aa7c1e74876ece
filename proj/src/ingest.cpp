#include "liq/ingest.hpp"

#include <ostream>

#include "liq/csv.hpp"

namespace liq {

namespace {

void check_order(int64_t prev, int64_t cur, const std::string& name, long line) {
    if (cur < prev)
        throw ValidationError(name + ": timestamps must be non-decreasing", line);
}

void check_trade_fields(double price, double quantity, const std::string& name, long line) {
    if (!(price > 0)) throw ValidationError(name + ": price must be positive", line);
    if (!(quantity > 0)) throw ValidationError(name + ": quantity must be positive", line);
}

void check_quote_fields(double bid, double ask, double bid_size, double ask_size,
                        const std::string& name, long line) {
    if (!(bid > 0)) throw ValidationError(name + ": bid must be positive", line);
    if (!(ask >= bid)) throw ValidationError(name + ": ask must be >= bid", line);
    if (!(bid_size >= 0) || !(ask_size >= 0))
        throw ValidationError(name + ": quote sizes must be non-negative", line);
}

}  // namespace

std::vector<TradeEvent> parse_trades(std::istream& in, std::string name) {
    csv::Reader reader(in, kTradesHeader, name);
    std::vector<TradeEvent> out;
    std::vector<std::string_view> fields;
    while (reader.next_row(fields)) {
        TradeEvent t;
        t.timestamp = csv::parse_int(fields[0], reader.line());
        t.price = csv::parse_double(fields[1], reader.line());
        t.quantity = csv::parse_double(fields[2], reader.line());
        check_trade_fields(t.price, t.quantity, reader.name(), reader.line());
        if (!out.empty()) check_order(out.back().timestamp, t.timestamp, reader.name(), reader.line());
        out.push_back(t);
    }
    return out;
}

std::vector<QuoteEvent> parse_quotes(std::istream& in, std::string name) {
    csv::Reader reader(in, kQuotesHeader, name);
    std::vector<QuoteEvent> out;
    std::vector<std::string_view> fields;
    while (reader.next_row(fields)) {
        QuoteEvent q;
        q.timestamp = csv::parse_int(fields[0], reader.line());
        q.bid = csv::parse_double(fields[1], reader.line());
        q.ask = csv::parse_double(fields[2], reader.line());
        q.bid_size = csv::parse_double(fields[3], reader.line());
        q.ask_size = csv::parse_double(fields[4], reader.line());
        check_quote_fields(q.bid, q.ask, q.bid_size, q.ask_size, reader.name(), reader.line());
        if (!out.empty()) check_order(out.back().timestamp, q.timestamp, reader.name(), reader.line());
        out.push_back(q);
    }
    return out;
}

std::vector<EnrichedTrade> parse_enriched(std::istream& in, std::string name) {
    csv::Reader reader(in, kEnrichedHeader, name);
    std::vector<EnrichedTrade> out;
    std::vector<std::string_view> fields;
    while (reader.next_row(fields)) {
        EnrichedTrade e;
        e.trade.timestamp = csv::parse_int(fields[0], reader.line());
        e.trade.price = csv::parse_double(fields[1], reader.line());
        e.trade.quantity = csv::parse_double(fields[2], reader.line());
        e.prev_quote.timestamp = e.trade.timestamp - 1;
        e.prev_quote.bid = csv::parse_double(fields[3], reader.line());
        e.prev_quote.ask = csv::parse_double(fields[4], reader.line());
        e.prev_quote.bid_size = csv::parse_double(fields[5], reader.line());
        e.prev_quote.ask_size = csv::parse_double(fields[6], reader.line());
        check_trade_fields(e.trade.price, e.trade.quantity, reader.name(), reader.line());
        check_quote_fields(e.prev_quote.bid, e.prev_quote.ask, e.prev_quote.bid_size,
                           e.prev_quote.ask_size, reader.name(), reader.line());
        if (!out.empty())
            check_order(out.back().trade.timestamp, e.trade.timestamp, reader.name(), reader.line());
        out.push_back(e);
    }
    return out;
}

void write_trades(std::ostream& out, const std::vector<TradeEvent>& trades) {
    csv::Writer w(out, kTradesHeader);
    for (const auto& t : trades)
        w.row({csv::format_int(t.timestamp), csv::format_double(t.price),
               csv::format_double(t.quantity)});
}

void write_quotes(std::ostream& out, const std::vector<QuoteEvent>& quotes) {
    csv::Writer w(out, kQuotesHeader);
    for (const auto& q : quotes)
        w.row({csv::format_int(q.timestamp), csv::format_double(q.bid), csv::format_double(q.ask),
               csv::format_double(q.bid_size), csv::format_double(q.ask_size)});
}

void write_enriched(std::ostream& out, const std::vector<EnrichedTrade>& ticks) {
    csv::Writer w(out, kEnrichedHeader);
    for (const auto& e : ticks)
        w.row({csv::format_int(e.trade.timestamp), csv::format_double(e.trade.price),
               csv::format_double(e.trade.quantity), csv::format_double(e.prev_quote.bid),
               csv::format_double(e.prev_quote.ask), csv::format_double(e.prev_quote.bid_size),
               csv::format_double(e.prev_quote.ask_size)});
}

std::vector<EnrichedTrade> attach_prevailing_quote(const std::vector<TradeEvent>& trades,
                                                   const std::vector<QuoteEvent>& quotes,
                                                   size_t* n_dropped) {
    std::vector<EnrichedTrade> out;
    out.reserve(trades.size());
    size_t dropped = 0;
    size_t qi = 0;  // index of the first quote NOT yet known to precede the current trade
    for (const auto& t : trades) {
        while (qi < quotes.size() && quotes[qi].timestamp < t.timestamp) ++qi;
        if (qi == 0) {
            ++dropped;
            continue;
        }
        out.push_back({t, quotes[qi - 1]});
    }
    if (n_dropped) *n_dropped = dropped;
    return out;
}

}  // namespace liq
