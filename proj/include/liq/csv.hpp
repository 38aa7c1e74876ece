#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "liq/errors.hpp"

namespace liq::csv {

// Shortest decimal form that parses back to the same double (std::to_chars).
// Missing values (NaN) format as the empty string.
std::string format_double(double v);
std::string format_int(int64_t v);

// Parse helpers. Empty fields parse to NaN for doubles.
double parse_double(std::string_view field, long line);
int64_t parse_int(std::string_view field, long line);

// Split a line on commas. No quoting: every format in this project is purely
// numeric plus ISO dates and short labels.
std::vector<std::string_view> split(std::string_view line);

// Line-oriented CSV reader with a mandatory header row.
class Reader {
public:
    // Throws ParseError if the stream is unreadable or the header mismatches.
    Reader(std::istream& in, std::string_view expected_header, std::string name);

    // Returns false at end of input. Fields are views into an internal buffer
    // valid until the next call.
    bool next_row(std::vector<std::string_view>& fields);

    long line() const { return line_; }
    const std::string& name() const { return name_; }

private:
    std::istream& in_;
    std::string buf_;
    std::string name_;
    long line_ = 0;
    size_t n_cols_ = 0;
};

class Writer {
public:
    Writer(std::ostream& out, std::string_view header);

    // Writes one row; fields are emitted verbatim, comma-separated.
    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

}  // namespace liq::csv
