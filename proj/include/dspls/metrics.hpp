#pragma once

#include <cstddef>

#include "dspls/linalg.hpp"

namespace dspls {

double rmse(const Vector& y, const Vector& yhat);
double mae(const Vector& y, const Vector& yhat);
double mse(const Vector& y, const Vector& yhat);

/// 1 - SSres/SStot; requires Var(y) > 0.
double r_squared(const Vector& y, const Vector& yhat);

/// Count of entries with |v_p| > tol. Solvers produce exact zeros, so the
/// default tolerance is 0.
std::size_t l0(const Vector& v, double tol = 0.0);
std::size_t l0_complement(const Vector& v, double tol = 0.0);

}  // namespace dspls
