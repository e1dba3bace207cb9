#pragma once

// Data-parallel inner loops used by the whole library. Each operation has a
// scalar reference implementation and, on x86-64, an AVX2 variant compiled in
// its own translation unit. The active backend is picked once at startup from
// CPU capabilities; DSPLS_KERNELS=scalar|avx2 overrides the choice.

#include <cstddef>

namespace dspls::kernels {

struct Ops {
    // sum_p a[p]*b[p]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[p] += alpha*x[p]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // x[p] *= alpha
    void (*scale)(double alpha, double* x, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*sum_abs)(const double* x, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    // sum_p (a[p]-b[p])^2, computed on differences (exact zero for duplicates)
    double (*dist_sq)(const double* a, const double* b, std::size_t n);
    // out[p] = sign(z[p]) * max(|z[p]| - nu, 0)
    void (*soft_threshold)(const double* z, double nu, double* out, std::size_t n);
    const char* name;
};

const Ops& scalar_ops();

#if defined(DSPLS_BUILD_AVX2)
const Ops& avx2_ops();
#endif

bool avx2_available();

/// Backend selected at first use (env override, then CPU detection).
const Ops& active();

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { active().axpy(alpha, x, y, n); }
inline void scale(double alpha, double* x, std::size_t n) { active().scale(alpha, x, n); }
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double sum_abs(const double* x, std::size_t n) { return active().sum_abs(x, n); }
inline double sum_sq(const double* x, std::size_t n) { return active().sum_sq(x, n); }
inline double dist_sq(const double* a, const double* b, std::size_t n) { return active().dist_sq(a, b, n); }
inline void soft_threshold(const double* z, double nu, double* out, std::size_t n) {
    active().soft_threshold(z, nu, out, n);
}

}  // namespace dspls::kernels
