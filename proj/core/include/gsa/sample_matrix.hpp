#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gsa {

/// Dense row-major table of points; row = point, column = input.
///
/// Generators in this library only produce values in [0, 1). After a
/// quantile transform the same type carries values in the open unit interval,
/// so the container itself does not enforce a range.
class SampleMatrix {
public:
    SampleMatrix() = default;
    SampleMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return values_.empty(); }

    double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const noexcept {
        return {values_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const;

    std::span<const double> values() const noexcept { return values_; }

    /// Columns [first, first + count) as a new matrix.
    SampleMatrix column_block(std::size_t first, std::size_t count) const;

    /// True when every value lies in [0, 1).
    bool in_unit_cube() const noexcept;

    friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

} // namespace gsa
