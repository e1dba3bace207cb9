#include "dspls/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace dspls::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sum_abs_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
    return acc;
}

double sum_sq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double dist_sq_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void soft_threshold_scalar(const double* z, double nu, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::fabs(z[i]) - nu;
        out[i] = m > 0.0 ? std::copysign(m, z[i]) : 0.0;
    }
}

const Ops& select_backend() {
    if (const char* env = std::getenv("DSPLS_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_ops();
#if defined(DSPLS_BUILD_AVX2)
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return avx2_ops();
#endif
    }
#if defined(DSPLS_BUILD_AVX2)
    if (avx2_available()) return avx2_ops();
#endif
    return scalar_ops();
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {dot_scalar,     axpy_scalar,    scale_scalar,
                            sum_scalar,     sum_abs_scalar, sum_sq_scalar,
                            dist_sq_scalar, soft_threshold_scalar,
                            "scalar"};
    return ops;
}

bool avx2_available() {
#if defined(DSPLS_BUILD_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops& active() {
    static const Ops& selected = select_backend();
    return selected;
}

}  // namespace dspls::kernels
