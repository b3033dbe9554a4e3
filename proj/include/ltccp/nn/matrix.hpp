#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ltccp::nn {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// out = m * v (out is overwritten)
void matvec(const Matrix& m, std::span<const double> v, std::span<double> out);

// out += m^T * v
void matvec_transposed_add(const Matrix& m, std::span<const double> v, std::span<double> out);

// m += a * b^T
void outer_add(Matrix& m, std::span<const double> a, std::span<const double> b);

}  // namespace ltccp::nn
