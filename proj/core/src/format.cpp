#include "gsa/format.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "gsa/error.hpp"

namespace gsa {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (text == "nan") return std::nan("");
    if (text == "inf") return INFINITY;
    if (text == "-inf") return -INFINITY;
    double v = 0.0;
    const auto* first = text.data();
    if (!text.empty() && text.front() == '+') ++first;
    const auto res = std::from_chars(first, text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        throw FormatError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::int64_t parse_int(std::string_view text) {
    text = trim(text);
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        throw FormatError("not an integer: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = text.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = text.find_last_not_of(ws);
    return text.substr(b, e - b + 1);
}

void write_matrix_csv(std::ostream& os, const SampleMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) os << ',';
            os << format_double(m(r, c));
        }
        os << '\n';
    }
}

SampleMatrix read_matrix_csv(std::istream& is) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (rows == 0) cols = fields.size();
        if (fields.size() != cols) {
            throw FormatError("matrix CSV row " + std::to_string(rows + 1) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(cols));
        }
        for (auto f : fields) values.push_back(parse_double(f));
        ++rows;
    }
    if (rows == 0) throw FormatError("matrix CSV is empty");
    return SampleMatrix(rows, cols, std::move(values));
}

std::ptrdiff_t NamedColumns::find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

NamedColumns read_named_csv(std::istream& is) {
    NamedColumns out;
    std::string line;
    while (std::getline(is, line) && trim(line).empty()) {
    }
    if (trim(line).empty()) throw FormatError("CSV has no header row");
    for (auto f : split(line, ',')) out.names.emplace_back(trim(f));
    out.columns.resize(out.names.size());
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split(line, ',');
        if (fields.size() != out.names.size()) {
            throw FormatError("CSV row " + std::to_string(row) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(out.names.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) out.columns[c].push_back(parse_double(fields[c]));
    }
    return out;
}

} // namespace gsa
