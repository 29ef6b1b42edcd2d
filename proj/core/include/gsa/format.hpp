#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gsa/sample_matrix.hpp"

namespace gsa {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// Strict parse of a whole field; throws FormatError.
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Headerless CSV, one row per point.
void write_matrix_csv(std::ostream& os, const SampleMatrix& m);
SampleMatrix read_matrix_csv(std::istream& is);

/// A CSV with a header row of column names and numeric cells.
struct NamedColumns {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    /// Index of `name`, or -1.
    std::ptrdiff_t find(std::string_view name) const;
};

NamedColumns read_named_csv(std::istream& is);

} // namespace gsa
