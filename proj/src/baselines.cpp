#include "dspls/baselines.hpp"

#include <cmath>
#include <string>

#include "dspls/kernels.hpp"

namespace dspls {

Vector ols_fit(const Matrix& X, const Vector& y) {
    if (X.rows() != y.size()) throw std::invalid_argument("ols_fit: size mismatch");
    return solve_spd(gram(X), matvec_transposed(X, y));
}

Vector ridge_fit(const Matrix& X, const Vector& y, double t) {
    if (X.rows() != y.size()) throw std::invalid_argument("ridge_fit: size mismatch");
    if (!(t > 0.0)) throw std::invalid_argument("ridge_fit: t must be > 0");
    Matrix a = gram(X);
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += t;
    return solve_spd(a, matvec_transposed(X, y));
}

Vector lasso_fit(const Matrix& X, const Vector& y, double t, LassoOptions options) {
    const std::size_t n = X.rows(), p = X.cols();
    if (n != y.size()) throw std::invalid_argument("lasso_fit: size mismatch");
    if (t < 0.0) throw std::invalid_argument("lasso_fit: t must be >= 0");

    // Column-major copy so each coordinate update streams one contiguous row.
    Matrix cols(p, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = X.row(i);
        for (std::size_t j = 0; j < p; ++j) cols(j, i) = r[j];
    }
    Vector col_sq(p);
    for (std::size_t j = 0; j < p; ++j) col_sq[j] = kernels::sum_sq(cols.row(j), n);

    Vector beta(p, 0.0);
    Vector residual(y);
    double prev_objective = 0.5 * kernels::sum_sq(residual.data(), n);

    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        double max_delta = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (col_sq[j] == 0.0) continue;
            const double c = kernels::dot(cols.row(j), residual.data(), n) + beta[j] * col_sq[j];
            const double mag = std::fabs(c) - t;
            const double next = mag > 0.0 ? std::copysign(mag, c) / col_sq[j] : 0.0;
            const double delta = next - beta[j];
            if (delta != 0.0) {
                kernels::axpy(-delta, cols.row(j), residual.data(), n);
                beta[j] = next;
                max_delta = std::max(max_delta, std::fabs(delta));
            }
        }
        const double objective =
            0.5 * kernels::sum_sq(residual.data(), n) + t * norm_l1(beta);
        if (objective > prev_objective + 1e-9 * (1.0 + std::fabs(prev_objective))) {
            throw std::logic_error("lasso_fit: objective increased across a sweep");
        }
        prev_objective = objective;
        if (max_delta <= options.tol) return beta;
    }
    throw NoConvergence("lasso_fit: no convergence after " + std::to_string(options.max_iter) +
                            " sweeps",
                        beta);
}

}  // namespace dspls
