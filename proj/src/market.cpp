#include "liq/market.hpp"

#include <cctype>
#include <string>

#include "liq/errors.hpp"

namespace liq {

namespace {

constexpr int64_t hm(int64_t h, int64_t m) { return (h * 60 + m) * kNsPerMin; }

// Floor division so pre-epoch timestamps land on the correct calendar day.
int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

void MarketConfig::validate() const {
    if (bin_length_ns <= 0) throw ConfigError("market " + zone + ": bin length must be positive");
    if (!(open_ns < close_ns)) throw ConfigError("market " + zone + ": open must precede close");
    if (open_ns < 0 || close_ns > kNsPerDay)
        throw ConfigError("market " + zone + ": session must lie within one day");
    int64_t tradable = close_ns - open_ns;
    if (has_lunch) {
        if (!(open_ns < lunch_start_ns && lunch_start_ns < lunch_end_ns && lunch_end_ns < close_ns))
            throw ConfigError("market " + zone + ": lunch break must lie strictly inside the session");
        if ((lunch_start_ns - open_ns) % bin_length_ns != 0 ||
            (close_ns - lunch_end_ns) % bin_length_ns != 0)
            throw ConfigError("market " + zone +
                              ": session segments must be whole multiples of the bin length");
        tradable -= lunch_end_ns - lunch_start_ns;
    }
    if (tradable % bin_length_ns != 0)
        throw ConfigError("market " + zone + ": session must be a whole multiple of the bin length");
}

int MarketConfig::bins_per_day() const {
    int64_t tradable = close_ns - open_ns;
    if (has_lunch) tradable -= lunch_end_ns - lunch_start_ns;
    return static_cast<int>(tradable / bin_length_ns);
}

int MarketConfig::morning_bins() const {
    if (!has_lunch) return bins_per_day();
    return static_cast<int>((lunch_start_ns - open_ns) / bin_length_ns);
}

MarketConfig MarketConfig::preset(std::string_view zone) {
    MarketConfig m;
    std::string key;
    for (char c : zone) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key == "us") {
        m.zone = "US";
        m.open_ns = hm(9, 30);
        m.close_ns = hm(16, 0);
    } else if (key == "uk") {
        m.zone = "UK";
        m.open_ns = hm(8, 0);
        m.close_ns = hm(16, 30);
    } else if (key == "japan" || key == "jp") {
        m.zone = "Japan";
        m.open_ns = hm(9, 0);
        m.close_ns = hm(15, 0);
        m.has_lunch = true;
        m.lunch_start_ns = hm(11, 30);
        m.lunch_end_ns = hm(12, 30);
    } else if (key == "hongkong" || key == "hk") {
        m.zone = "HongKong";
        m.open_ns = hm(9, 30);
        m.close_ns = hm(16, 0);
        m.has_lunch = true;
        m.lunch_start_ns = hm(12, 0);
        m.lunch_end_ns = hm(13, 0);
    } else {
        throw ConfigError("unknown market '" + std::string(zone) +
                          "' (expected US, UK, Japan, or HongKong)");
    }
    m.validate();
    return m;
}

int64_t bin_start_ns(Date day, int slot, const MarketConfig& market) {
    if (slot < 0 || slot >= market.bins_per_day())
        throw ConfigError("bin_start_ns: slot outside the market's bin range");
    int64_t tod;
    int morning = market.morning_bins();
    if (market.has_lunch && slot >= morning)
        tod = market.lunch_end_ns + static_cast<int64_t>(slot - morning) * market.bin_length_ns;
    else
        tod = market.open_ns + static_cast<int64_t>(slot) * market.bin_length_ns;
    return static_cast<int64_t>(day) * kNsPerDay + tod;
}

std::optional<std::pair<Date, int>> assign_bin(int64_t timestamp_ns, const MarketConfig& market) {
    int64_t day = floor_div(timestamp_ns, kNsPerDay);
    int64_t tod = timestamp_ns - day * kNsPerDay;
    if (tod < market.open_ns || tod >= market.close_ns) return std::nullopt;
    int slot;
    if (market.has_lunch && tod >= market.lunch_start_ns) {
        if (tod < market.lunch_end_ns) return std::nullopt;
        slot = market.morning_bins() +
               static_cast<int>((tod - market.lunch_end_ns) / market.bin_length_ns);
    } else {
        slot = static_cast<int>((tod - market.open_ns) / market.bin_length_ns);
    }
    return std::make_pair(static_cast<Date>(day), slot);
}

}  // namespace liq
