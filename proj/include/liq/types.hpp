#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "liq/errors.hpp"

namespace liq {

// Calendar date stored as days since 1970-01-01.
using Date = int32_t;

constexpr int64_t kNsPerSec = 1'000'000'000LL;
constexpr int64_t kNsPerMin = 60LL * kNsPerSec;
constexpr int64_t kNsPerDay = 24LL * 60LL * kNsPerMin;

// Missing values travel as NaN through panels and series.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

// The four liquidity variables, in canonical order. The order doubles as the
// lexicographic order used when breaking ties between explanatory subsets.
enum class Var : int {
    Volatility = 0,  // Garman-Klass estimate per bin
    Spread     = 1,  // best ask minus best bid
    Book       = 2,  // average size at first limits
    Turnover   = 3,  // traded value per bin
};

constexpr int kNumVars = 4;
constexpr std::array<Var, kNumVars> kAllVars = {Var::Volatility, Var::Spread,
                                                Var::Book, Var::Turnover};

std::string_view var_name(Var v);          // "volatility", "spread", "book", "turnover"
std::string_view var_symbol(Var v);        // "sigma", "psi", "B", "V"
Var var_from_name(std::string_view name);  // throws ConfigError on unknown name

// Explanatory subsets are bitmasks over the four variables: bit i set means
// variable i is included. Mask 0 is the empty subset (seasonal-mean baseline).
using VarSet = uint8_t;
constexpr int kNumSubsets = 16;

inline bool set_contains(VarSet s, Var v) { return (s >> static_cast<int>(v)) & 1; }
inline VarSet set_with(VarSet s, Var v) { return static_cast<VarSet>(s | (1u << static_cast<int>(v))); }
inline int set_size(VarSet s) { return __builtin_popcount(s); }

// Human-readable subset label, e.g. "sigma+B", or "none" for the empty subset.
std::string set_label(VarSet s);
VarSet set_from_label(std::string_view label);  // inverse of set_label

// True if a precedes b in the tie-break order used by model selection:
// smaller cardinality first, then lexicographic on the member list.
bool set_less(VarSet a, VarSet b);

// ---- dates ----------------------------------------------------------------

Date date_from_ymd(int year, int month, int day);
void ymd_from_date(Date d, int& year, int& month, int& day);
std::string date_to_iso(Date d);
Date date_from_iso(std::string_view s);  // throws ParseError

}  // namespace liq
