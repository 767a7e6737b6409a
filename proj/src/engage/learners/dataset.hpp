#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "../errors.hpp"

namespace engage {

/// Row-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void push_row(std::span<const double> values) {
        if (cols_ == 0) cols_ = values.size();
        if (values.size() != cols_) throw InternalError("row width mismatch in Matrix::push_row");
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    const std::vector<double>& data() const { return data_; }

    void check_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) throw DataError("non-finite feature value");
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace engage
