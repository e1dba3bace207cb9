#pragma once

// Calibration/validation splitting on X distances (Kennard-Stone) or on X
// distances within y-quantile strata (CalValXy).

#include <cstddef>
#include <string>
#include <vector>

#include "dspls/linalg.hpp"

namespace dspls {

enum class SplitMethod { random, kennard_stone, calvalxy };

const char* to_string(SplitMethod method);

struct SplitPlan {
    std::vector<std::size_t> calibration_idx;  // 0-based, ascending
    std::vector<std::size_t> validation_idx;
    SplitMethod method = SplitMethod::random;
    std::string params;
};

/// First pick is the observation farthest from the centroid; each later pick
/// maximizes the minimum distance to the picks so far. Ties go to the lowest
/// index.
SplitPlan kennard_stone(const Matrix& X, std::size_t n_cal);

/// Kennard-Stone restricted to cycling y-quantile subsets, with per-subset
/// quotas allocated proportionally (largest-remainder rounding).
SplitPlan calvalxy(const Matrix& X, const Vector& y, std::size_t n_cal, std::size_t n_groups);

Matrix take_rows(const Matrix& X, const std::vector<std::size_t>& idx);
Vector take(const Vector& v, const std::vector<std::size_t>& idx);

void save_split_csv(const std::string& path, const SplitPlan& plan);

}  // namespace dspls
