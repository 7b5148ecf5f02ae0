#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace typent::linalg {

/// Row-major dense matrix of doubles. Only what the solvers here need.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }

    double trace() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

    std::size_t size() const noexcept { return n_; }
    std::complex<double>& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
        return data_[i * n_ + j];
    }

private:
    std::size_t n_ = 0;
    std::vector<std::complex<double>> data_;
};

/// Eigenvalues of the symmetric tridiagonal matrix with the given diagonal
/// and sub-diagonal (off_diagonal.size() == diagonal.size() - 1), ascending.
/// Implicit-shift QL with Wilkinson shifts.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diagonal,
                                            std::span<const double> off_diagonal);

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is
/// read. Householder reduction to real tridiagonal form, then QL.
std::vector<double> hermitian_eigenvalues(ComplexMatrix a);

/// True when the symmetric matrix admits a Cholesky factorization with
/// strictly positive pivots.
bool is_positive_definite(const Matrix& a);

/// Solves a x = b by Gaussian elimination with partial pivoting. Throws
/// DomainError on an exactly singular pivot.
std::vector<double> solve(Matrix a, std::vector<double> b);

}  // namespace typent::linalg
