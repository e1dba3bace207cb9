#pragma once

// Aggregation helpers shared by cross-validation and benchmarking.

#include <string>
#include <vector>

#include "dspls/datasets.hpp"
#include "dspls/pls.hpp"

namespace dspls {

struct RecoveryScore {
    double precision = 1.0;  // 1 by convention when the support is empty
    double recall = 0.0;
    bool degenerate = false;  // set when the support is empty
};

/// Fraction of the selected support inside the true active set, and fraction
/// of the active set recovered. Dense estimators should pass a tolerance of
/// 1e-8 * max|beta| so that "selected" is meaningful.
RecoveryScore recovery_score(const Vector& beta, const std::vector<IndexRange>& active_set,
                             double tol = 0.0);

struct MetricRow {
    std::string method;
    std::size_t order = 0;  // 0 for order-free estimators
    std::string set;        // "cal" or "val"
    double rmse = 0.0;
    double mae = 0.0;
    double r2 = 0.0;
};

/// One row per (model, order, set) for orders 1..min(M, m_max).
std::vector<MetricRow> metric_table(const std::vector<std::pair<std::string, FittedModel>>& models,
                                    const Matrix& x_cal, const Vector& y_cal, const Matrix& x_val,
                                    const Vector& y_val, std::size_t m_max);

}  // namespace dspls
