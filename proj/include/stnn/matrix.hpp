#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "stnn/errors.hpp"

namespace stnn {

/// Dense row-major matrix of doubles. Rows are contiguous.
class Matrix {
 public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_values(std::size_t rows, std::size_t cols,
                              std::vector<double> values) {
        if (values.size() != rows * cols) {
            throw DimensionError("matrix value count " +
                                 std::to_string(values.size()) +
                                 " does not match " + std::to_string(rows) +
                                 "x" + std::to_string(cols));
        }
        Matrix m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.data_ = std::move(values);
        return m;
    }

    double& operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) {
        return {data_.data() + r * cols_, cols_};
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace stnn
