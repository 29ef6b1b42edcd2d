#include "gsa/sample_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsa {

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols) {
        throw std::invalid_argument("SampleMatrix: value count does not match shape");
    }
}

std::vector<double> SampleMatrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

SampleMatrix SampleMatrix::column_block(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw std::out_of_range("SampleMatrix::column_block");
    SampleMatrix out(rows_, count);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(r * cols_ + first), count,
                    out.values_.begin() + static_cast<std::ptrdiff_t>(r * count));
    }
    return out;
}

bool SampleMatrix::in_unit_cube() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0 && v < 1.0; });
}

} // namespace gsa
