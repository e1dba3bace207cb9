#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dspls/errors.hpp"

namespace dspls {

using Vector = std::vector<double>;

/// Dense row-major matrix of observations (rows) by variables (columns).
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct CenteringStats {
    Vector col_means;
    double y_mean = 0.0;
};

struct CenteredMatrix {
    Matrix values;
    Vector col_means;
};

struct CenteredVector {
    Vector values;
    double mean = 0.0;
};

/// Throws std::invalid_argument when any entry is NaN or infinite.
void ensure_finite(const double* x, std::size_t n, const char* what);
void ensure_finite(const Vector& v, const char* what);
void ensure_finite(const Matrix& m, const char* what);

double norm_l1(const Vector& v);
double norm_l2(const Vector& v);
double frobenius_norm(const Matrix& m);

CenteredMatrix mean_center(const Matrix& X);
CenteredVector mean_center(const Vector& y);

/// X^T X, exactly symmetric (upper triangle computed, mirrored).
Matrix gram(const Matrix& X);

/// y = X w (length rows).
Vector matvec(const Matrix& X, const Vector& w);
/// z = X^T y (length cols).
Vector matvec_transposed(const Matrix& X, const Vector& y);

/// Cholesky factorization with a relative pivot tolerance of
/// 1e-12 * max(diag A); reusable across many right-hand sides. Solves apply
/// one step of iterative refinement against the retained matrix.
class CholeskyFactor {
  public:
    explicit CholeskyFactor(Matrix A);

    Vector solve(const Vector& b) const;
    std::size_t dim() const { return n_; }

  private:
    Vector substitute(const Vector& b) const;

    std::size_t n_ = 0;
    Matrix matrix_;
    Matrix lower_;
};

Vector solve_spd(const Matrix& A, const Vector& b);

/// X - t (t^T t)^{-1} t^T X: removes the score direction from every column.
Matrix deflate(const Matrix& X, const Vector& t);
void deflate_inplace(Matrix& X, const Vector& t);

}  // namespace dspls
