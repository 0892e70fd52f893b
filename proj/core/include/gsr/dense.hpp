#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gsr {

// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const;
    Matrix select_columns(std::span<const std::size_t> cols) const;

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(std::span<const double> a) noexcept;

std::vector<double> multiply(const Matrix& a, std::span<const double> x);
Matrix multiply(const Matrix& a, const Matrix& b);
// A^T A.
Matrix gram(const Matrix& a);

// In-place lower Cholesky factor. Returns false when a pivot is not positive.
bool cholesky(Matrix& a);
// Solves L L^T x = b in place.
void cholesky_solve(const Matrix& l, std::span<double> b);
// Inverse of L L^T from its factor.
Matrix cholesky_inverse(const Matrix& l);

struct SymmetricEigen {
    std::vector<double> values; // ascending
    Matrix vectors;             // column k pairs with values[k]
    int sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
// tol times the Frobenius norm of the input.
SymmetricEigen jacobi_eigen(Matrix a, double tol = 1e-12, int max_sweeps = 100);

} // namespace gsr
