#pragma once

// Cross-validated choice of the number of latent components and of baseline
// hyperparameters. One fit per split at the maximum order; validation MSE is
// read off at every nested order.

#include <cstdint>

#include "dspls/pls.hpp"
#include "dspls/sampling.hpp"

namespace dspls {

struct CvPlan {
    std::size_t n_splits = 10;
    double calibration_fraction = 0.8;
    std::uint64_t seed = 0;
    SplitMethod splitter = SplitMethod::random;
    std::size_t calvalxy_groups = 10;

    void validate() const;
};

struct CvTable {
    std::vector<double> mean_mse;  // index k-1 = order k; NaN when never reached
    std::vector<double> std_mse;
    std::vector<std::size_t> n_evals;
};

struct ComponentSelection {
    std::size_t best_order = 0;
    CvTable table;
};

/// Splits for the plan. Random splits are repaired deterministically so that
/// every observation validates at least once whenever
/// n_splits * (1 - fraction) * N >= N.
std::vector<SplitPlan> make_splits(const Matrix& X, const Vector& y, const CvPlan& plan);

/// Smallest order attaining the minimum mean MSE.
std::size_t pick_best_order(const CvTable& table);

ComponentSelection select_components(const Matrix& X, const Vector& y, const PenaltySpec& spec,
                                     std::size_t m_max, const CvPlan& plan);

enum class BaselineMethod { ridge, lasso };

double select_hyperparameter(const Matrix& X, const Vector& y, BaselineMethod method,
                             const std::vector<double>& grid, const CvPlan& plan);

}  // namespace dspls
