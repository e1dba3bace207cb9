#include "dspls/linalg.hpp"

#include <cmath>
#include <string>

#include "dspls/kernels.hpp"

namespace dspls {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

void ensure_finite(const double* x, std::size_t n, const char* what) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i])) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry at position " +
                                        std::to_string(i));
        }
    }
}

void ensure_finite(const Vector& v, const char* what) { ensure_finite(v.data(), v.size(), what); }

void ensure_finite(const Matrix& m, const char* what) { ensure_finite(m.data(), m.size(), what); }

double norm_l1(const Vector& v) { return kernels::sum_abs(v.data(), v.size()); }

double norm_l2(const Vector& v) { return std::sqrt(kernels::sum_sq(v.data(), v.size())); }

double frobenius_norm(const Matrix& m) { return std::sqrt(kernels::sum_sq(m.data(), m.size())); }

CenteredMatrix mean_center(const Matrix& X) {
    ensure_finite(X, "mean_center: X");
    const std::size_t n = X.rows(), p = X.cols();
    CenteredMatrix out;
    out.col_means.assign(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        kernels::axpy(1.0, X.row(i), out.col_means.data(), p);
    }
    kernels::scale(1.0 / static_cast<double>(n), out.col_means.data(), p);
    out.values = X;
    for (std::size_t i = 0; i < n; ++i) {
        kernels::axpy(-1.0, out.col_means.data(), out.values.row(i), p);
    }
    return out;
}

CenteredVector mean_center(const Vector& y) {
    ensure_finite(y, "mean_center: y");
    CenteredVector out;
    out.mean = kernels::sum(y.data(), y.size()) / static_cast<double>(y.size());
    out.values = y;
    for (double& v : out.values) v -= out.mean;
    return out;
}

Matrix gram(const Matrix& X) {
    const std::size_t n = X.rows(), p = X.cols();
    Matrix g(p, p);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = X.row(i);
        for (std::size_t j = 0; j < p; ++j) {
            if (r[j] != 0.0) kernels::axpy(r[j], r + j, g.row(j) + j, p - j);
        }
    }
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = j + 1; k < p; ++k) g(k, j) = g(j, k);
    }
    return g;
}

Vector matvec(const Matrix& X, const Vector& w) {
    Vector y(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) y[i] = kernels::dot(X.row(i), w.data(), X.cols());
    return y;
}

Vector matvec_transposed(const Matrix& X, const Vector& y) {
    Vector z(X.cols(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        if (y[i] != 0.0) kernels::axpy(y[i], X.row(i), z.data(), X.cols());
    }
    return z;
}

CholeskyFactor::CholeskyFactor(Matrix A) : n_(A.rows()), matrix_(A), lower_(std::move(A)) {
    if (lower_.rows() != lower_.cols()) {
        throw std::invalid_argument("CholeskyFactor: matrix must be square");
    }
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n_; ++i) max_diag = std::max(max_diag, lower_(i, i));
    const double pivot_tol = 1e-12 * max_diag;

    for (std::size_t j = 0; j < n_; ++j) {
        const double d = lower_(j, j) - kernels::dot(lower_.row(j), lower_.row(j), j);
        if (!(d > pivot_tol)) {
            throw SingularMatrix("solve_spd: pivot " + std::to_string(d) + " at column " +
                                 std::to_string(j) + " below tolerance");
        }
        const double ljj = std::sqrt(d);
        lower_(j, j) = ljj;
        for (std::size_t i = j + 1; i < n_; ++i) {
            lower_(i, j) = (lower_(i, j) - kernels::dot(lower_.row(i), lower_.row(j), j)) / ljj;
        }
        for (std::size_t k = j + 1; k < n_; ++k) lower_(j, k) = 0.0;
    }
}

Vector CholeskyFactor::substitute(const Vector& b) const {
    Vector x(b);
    for (std::size_t i = 0; i < n_; ++i) {
        x[i] = (x[i] - kernels::dot(lower_.row(i), x.data(), i)) / lower_(i, i);
    }
    for (std::size_t ii = n_; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n_; ++k) s -= lower_(k, ii) * x[k];
        x[ii] = s / lower_(ii, ii);
    }
    return x;
}

Vector CholeskyFactor::solve(const Vector& b) const {
    if (b.size() != n_) throw std::invalid_argument("solve: size mismatch");
    Vector x = substitute(b);
    Vector residual = matvec(matrix_, x);
    for (std::size_t i = 0; i < n_; ++i) residual[i] = b[i] - residual[i];
    const Vector correction = substitute(residual);
    for (std::size_t i = 0; i < n_; ++i) x[i] += correction[i];
    return x;
}

Vector solve_spd(const Matrix& A, const Vector& b) { return CholeskyFactor(A).solve(b); }

void deflate_inplace(Matrix& X, const Vector& t) {
    if (t.size() != X.rows()) throw std::invalid_argument("deflate: score length != rows");
    const double tt = kernels::sum_sq(t.data(), t.size());
    if (tt <= 0.0) throw std::invalid_argument("deflate: zero score vector");
    Vector proj = matvec_transposed(X, t);
    kernels::scale(1.0 / tt, proj.data(), proj.size());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        if (t[i] != 0.0) kernels::axpy(-t[i], proj.data(), X.row(i), X.cols());
    }
}

Matrix deflate(const Matrix& X, const Vector& t) {
    Matrix out = X;
    deflate_inplace(out, t);
    return out;
}

}  // namespace dspls
