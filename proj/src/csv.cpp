#include "liq/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <system_error>

namespace liq::csv {

std::string format_double(double v) {
    if (std::isnan(v)) return {};
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("double formatting failed");
    return std::string(buf, ptr);
}

std::string format_int(int64_t v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("integer formatting failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view field, long line) {
    if (field.empty()) return std::nan("");
    double v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("bad numeric field '" + std::string(field) + "'", line);
    return v;
}

int64_t parse_int(std::string_view field, long line) {
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("bad integer field '" + std::string(field) + "'", line);
    return v;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

namespace {
// Strips trailing CR so CRLF files parse identically to LF files.
bool get_line(std::istream& in, std::string& buf) {
    if (!std::getline(in, buf)) return false;
    if (!buf.empty() && buf.back() == '\r') buf.pop_back();
    return true;
}
}  // namespace

Reader::Reader(std::istream& in, std::string_view expected_header, std::string name)
    : in_(in), name_(std::move(name)) {
    if (!get_line(in_, buf_))
        throw ParseError(name_ + ": empty input, expected header '" + std::string(expected_header) + "'");
    ++line_;
    if (buf_ != expected_header)
        throw ParseError(name_ + ": bad header '" + buf_ + "', expected '" + std::string(expected_header) + "'", line_);
    n_cols_ = split(expected_header).size();
}

bool Reader::next_row(std::vector<std::string_view>& fields) {
    do {
        if (!get_line(in_, buf_)) return false;
        ++line_;
    } while (buf_.empty());
    fields = split(buf_);
    if (fields.size() != n_cols_)
        throw ParseError(name_ + ": expected " + std::to_string(n_cols_) + " fields, got " +
                             std::to_string(fields.size()),
                         line_);
    return true;
}

Writer::Writer(std::ostream& out, std::string_view header) : out_(out) {
    out_ << header << '\n';
}

void Writer::row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

}  // namespace liq::csv
