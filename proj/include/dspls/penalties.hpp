#pragma once

// Per-component weight solvers for the dual-norm penalties. Each solver
// maximizes z^T w over {Omega(w) = 1, w in the orthant of z} in closed form:
// an adaptive quantile of |z| sets the threshold, soft thresholding selects
// the support, and a penalty-specific normalizer restores Omega(w) = 1.

#include <cstdint>
#include <functional>
#include <vector>

#include "dspls/linalg.hpp"

namespace dspls {

/// Target fraction of zeroed coordinates per component, in [0, 1).
class ShrinkRatio {
  public:
    ShrinkRatio() = default;
    explicit ShrinkRatio(double value);
    double value() const { return value_; }

  private:
    double value_ = 0.0;
};

/// Threshold bookkeeping for one component: nu = lambda * mu.
struct ThresholdLog {
    double nu = 0.0;
    double mu = 0.0;
    double lambda = 0.0;
};

/// Assignment of each variable to one of n_groups contiguous-id groups.
struct GroupPartition {
    std::vector<int> group_of;  // values in [0, n_groups)
    int n_groups = 0;

    static GroupPartition contiguous_blocks(std::size_t n_vars, int n_groups);
    void validate(std::size_t n_vars) const;
    std::vector<std::vector<std::size_t>> members() const;
};

struct RidgeParams {
    double nu2 = 0.0;  // weight of the |Xw|_2 perturbation
};

struct WeightResult {
    Vector w;
    ThresholdLog log;
};

struct GroupWeightResult {
    Vector w;
    std::vector<ThresholdLog> logs;  // one per group
};

/// Calibration data at the current deflation stage, used by the group
/// grid search to score candidate weight vectors.
struct CalibrationContext {
    const Matrix& X;
    const Vector& y;
};

/// The ceil(varsigma*P)-th smallest magnitude; 0 when that count is 0.
double adaptive_threshold(const Vector& z_abs, ShrinkRatio varsigma);

Vector soft_threshold(const Vector& z, double nu);

WeightResult lasso_weight(const Vector& z, ShrinkRatio varsigma);

GroupWeightResult group_lasso_weight(const Vector& z, const GroupPartition& partition,
                                     const std::vector<ShrinkRatio>& varsigma_per_group,
                                     const CalibrationContext& context);

WeightResult ls_weight(const Matrix& X, const Vector& z, ShrinkRatio varsigma);
WeightResult ls_weight(const CholeskyFactor& gram_factor, const Vector& z, ShrinkRatio varsigma);

WeightResult ridge_weight(const Matrix& X, const Vector& z, ShrinkRatio varsigma,
                          RidgeParams params);
WeightResult ridge_weight(const Matrix& X, const CholeskyFactor& perturbed_gram_factor,
                          const Vector& z, ShrinkRatio varsigma, RidgeParams params);

/// Evaluatable penalty norms (the pseudo-LS norm is excluded: its N1 matrix
/// is never materialized).
class PenaltyNorm {
  public:
    static PenaltyNorm l2();
    static PenaltyNorm lasso(double lambda);
    static PenaltyNorm group(GroupPartition partition, Vector alpha, Vector lambda);
    /// lambda2 = nu2 * |Xw|_2 / |w|_2 evaluated at the solution.
    static PenaltyNorm ridge(double lambda1, double lambda2, const Matrix& X);

    double operator()(const Vector& v) const { return eval_(v); }

  private:
    std::function<double(const Vector&)> eval_;
};

struct DualityReport {
    double max_gap = 0.0;   // max over samples of z^T u - z^T w
    std::size_t trials = 0;
};

/// Monte-Carlo certificate: samples u with Omega(u)=1 in the orthant of z
/// and reports the largest improvement over w. Nonpositive (within the
/// sampling tolerance) certifies optimality at this resolution.
DualityReport check_dual_optimality(const Vector& z, const Vector& w, const PenaltyNorm& omega,
                                    std::size_t trials, std::uint64_t seed = 20230101);

}  // namespace dspls
