#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace dspls {

/// Deterministic draws on top of mt19937_64. Distributions are implemented
/// here rather than with std::*_distribution so a seed produces the same
/// stream on every standard library. One normal draw consumes exactly two
/// uniforms (no cached spare).
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal(double sd = 1.0) {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return sd * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = (UINT64_MAX / n) * n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[next_below(i)]);
        }
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace dspls
