#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ssm {

// Dense row-major matrix of doubles. Networks in this project are small,
// so everything is plain loops with a fixed accumulation order; that is
// what keeps training runs bit-reproducible.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m(rows.size(), rows.size() > 0 ? rows.begin()->size() : 0);
        std::size_t r = 0;
        for (const auto& row : rows) {
            std::size_t c = 0;
            for (double v : row) m(r, c++) = v;
            ++r;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

using Vector = std::vector<double>;

// Bernoulli mask over a weight matrix; entries are exactly 0.0 or 1.0.
using MaskTensor = Matrix;

// Copies `count` consecutive rows starting at `first`.
Matrix slice_rows(const Matrix& m, std::size_t first, std::size_t count);

// Row `r` as a standalone vector.
Vector row_of(const Matrix& m, std::size_t r);

}  // namespace ssm
