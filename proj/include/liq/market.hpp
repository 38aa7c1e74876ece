#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "liq/types.hpp"

namespace liq {

// Continuous-session calendar for one exchange. Times of day are nanoseconds
// since local midnight; event timestamps are interpreted as exchange-local.
struct MarketConfig {
    std::string zone = "custom";  // US, UK, Japan, HongKong, or custom
    int64_t open_ns = 0;
    int64_t close_ns = 0;
    bool has_lunch = false;
    int64_t lunch_start_ns = 0;  // [start, end), meaningful when has_lunch
    int64_t lunch_end_ns = 0;
    int64_t bin_length_ns = 5 * kNsPerMin;

    // Throws ConfigError unless: open < close, any lunch break lies strictly
    // inside the session, and both session segments are whole multiples of
    // bin_length.
    void validate() const;

    int bins_per_day() const;      // total tradable bins (lunch excluded)
    int morning_bins() const;      // bins before the lunch break (all, if none)

    // Built-in calendars:
    //   US 09:30-16:00 (78 bins), UK 08:00-16:30 (102),
    //   Japan 09:00-11:30 + 12:30-15:00 (60), HongKong 09:30-12:00 + 13:00-16:00 (66).
    static MarketConfig preset(std::string_view zone);
};

// Maps a timestamp to its (day, slot). Returns nullopt outside the continuous
// session: before open, at/after close (bins are half-open), or during lunch.
// Slots number only tradable bins, so the first afternoon bin follows the last
// morning bin directly.
std::optional<std::pair<Date, int>> assign_bin(int64_t timestamp_ns, const MarketConfig& market);

// Timestamp of a bin's opening instant (local-midnight based, like the inputs
// of assign_bin).
int64_t bin_start_ns(Date day, int slot, const MarketConfig& market);

}  // namespace liq
