#include "dspls/metrics.hpp"

#include <cmath>

#include "dspls/kernels.hpp"

namespace dspls {

namespace {

void check_lengths(const Vector& y, const Vector& yhat, const char* what) {
    if (y.size() != yhat.size() || y.empty()) {
        throw std::invalid_argument(std::string(what) + ": length mismatch");
    }
}

}  // namespace

double mse(const Vector& y, const Vector& yhat) {
    check_lengths(y, yhat, "mse");
    return kernels::dist_sq(y.data(), yhat.data(), y.size()) / static_cast<double>(y.size());
}

double rmse(const Vector& y, const Vector& yhat) {
    check_lengths(y, yhat, "rmse");
    return std::sqrt(mse(y, yhat));
}

double mae(const Vector& y, const Vector& yhat) {
    check_lengths(y, yhat, "mae");
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += std::fabs(y[i] - yhat[i]);
    return acc / static_cast<double>(y.size());
}

double r_squared(const Vector& y, const Vector& yhat) {
    check_lengths(y, yhat, "r_squared");
    const double mean = kernels::sum(y.data(), y.size()) / static_cast<double>(y.size());
    double ss_tot = 0.0;
    for (double v : y) ss_tot += (v - mean) * (v - mean);
    if (!(ss_tot > 0.0)) throw std::invalid_argument("r_squared: constant response");
    const double ss_res = kernels::dist_sq(y.data(), yhat.data(), y.size());
    return 1.0 - ss_res / ss_tot;
}

std::size_t l0(const Vector& v, double tol) {
    if (tol < 0.0) throw std::invalid_argument("l0: tol must be >= 0");
    std::size_t count = 0;
    for (double x : v) {
        if (std::fabs(x) > tol) ++count;
    }
    return count;
}

std::size_t l0_complement(const Vector& v, double tol) { return v.size() - l0(v, tol); }

}  // namespace dspls
