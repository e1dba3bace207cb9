#pragma once

// Classical comparators: ordinary least squares, closed-form ridge, and
// cyclic coordinate-descent lasso. All three operate on the data exactly as
// passed; centering and intercepts are the caller's concern.

#include <cstddef>

#include "dspls/linalg.hpp"

namespace dspls {

Vector ols_fit(const Matrix& X, const Vector& y);

Vector ridge_fit(const Matrix& X, const Vector& y, double t);

struct LassoOptions {
    double tol = 1e-8;           // max coefficient change per sweep
    std::size_t max_iter = 10000;
};

/// Minimizes 0.5 |y - X beta|_2^2 + t |beta|_1.
Vector lasso_fit(const Matrix& X, const Vector& y, double t, LassoOptions options = {});

}  // namespace dspls
