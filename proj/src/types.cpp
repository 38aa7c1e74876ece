#include "liq/types.hpp"

#include <charconv>
#include <chrono>

namespace liq {

std::string_view var_name(Var v) {
    switch (v) {
        case Var::Volatility: return "volatility";
        case Var::Spread: return "spread";
        case Var::Book: return "book";
        case Var::Turnover: return "turnover";
    }
    return "?";
}

std::string_view var_symbol(Var v) {
    switch (v) {
        case Var::Volatility: return "sigma";
        case Var::Spread: return "psi";
        case Var::Book: return "B";
        case Var::Turnover: return "V";
    }
    return "?";
}

Var var_from_name(std::string_view name) {
    for (Var v : kAllVars) {
        if (name == var_name(v) || name == var_symbol(v)) return v;
    }
    throw ConfigError("unknown variable name: " + std::string(name));
}

std::string set_label(VarSet s) {
    if (s == 0) return "none";
    std::string out;
    for (Var v : kAllVars) {
        if (set_contains(s, v)) {
            if (!out.empty()) out += '+';
            out += var_symbol(v);
        }
    }
    return out;
}

VarSet set_from_label(std::string_view label) {
    if (label.empty() || label == "none") return 0;
    VarSet s = 0;
    size_t pos = 0;
    while (pos < label.size()) {
        size_t next = label.find('+', pos);
        if (next == std::string_view::npos) next = label.size();
        s = set_with(s, var_from_name(label.substr(pos, next - pos)));
        pos = next + 1;
    }
    return s;
}

bool set_less(VarSet a, VarSet b) {
    if (set_size(a) != set_size(b)) return set_size(a) < set_size(b);
    // Lexicographic on member lists; with equal cardinality this is a
    // first-differing-member comparison in canonical variable order.
    for (Var v : kAllVars) {
        bool ina = set_contains(a, v);
        bool inb = set_contains(b, v);
        if (ina != inb) return ina;
    }
    return false;
}

Date date_from_ymd(int year, int month, int day) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year(year), std::chrono::month(unsigned(month)),
                       std::chrono::day(unsigned(day))};
    if (!ymd.ok()) {
        throw ParseError("invalid calendar date: " + std::to_string(year) + "-" +
                         std::to_string(month) + "-" + std::to_string(day));
    }
    return static_cast<Date>(sys_days(ymd).time_since_epoch().count());
}

void ymd_from_date(Date d, int& year, int& month, int& day) {
    using namespace std::chrono;
    year_month_day ymd{sys_days(days(d))};
    year = int(ymd.year());
    month = int(unsigned(ymd.month()));
    day = int(unsigned(ymd.day()));
}

std::string date_to_iso(Date d) {
    int y, m, dd;
    ymd_from_date(d, y, m, dd);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, dd);
    return buf;
}

Date date_from_iso(std::string_view s) {
    int y = 0, m = 0, d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        throw ParseError("expected ISO date yyyy-mm-dd, got '" + std::string(s) + "'");
    }
    auto num = [&](size_t off, size_t len, int& out) {
        auto res = std::from_chars(s.data() + off, s.data() + off + len, out);
        if (res.ec != std::errc() || res.ptr != s.data() + off + len) {
            throw ParseError("expected ISO date yyyy-mm-dd, got '" + std::string(s) + "'");
        }
    };
    num(0, 4, y);
    num(5, 2, m);
    num(8, 2, d);
    return date_from_ymd(y, m, d);
}

}  // namespace liq
