#include "dspls/reports.hpp"

#include <cmath>

#include "dspls/metrics.hpp"

namespace dspls {

RecoveryScore recovery_score(const Vector& beta, const std::vector<IndexRange>& active_set,
                             double tol) {
    std::vector<bool> active(beta.size(), false);
    std::size_t n_active = 0;
    for (const auto& r : active_set) {
        if (r.first < 1 || r.last < r.first || r.last > beta.size()) {
            throw std::invalid_argument("recovery_score: active range outside [1, P]");
        }
        for (std::size_t p = r.first; p <= r.last; ++p) {
            if (!active[p - 1]) {
                active[p - 1] = true;
                ++n_active;
            }
        }
    }
    std::size_t selected = 0, hits = 0;
    for (std::size_t p = 0; p < beta.size(); ++p) {
        if (std::fabs(beta[p]) > tol) {
            ++selected;
            if (active[p]) ++hits;
        }
    }
    RecoveryScore score;
    score.degenerate = selected == 0;
    score.precision = selected == 0 ? 1.0
                                    : static_cast<double>(hits) / static_cast<double>(selected);
    score.recall = static_cast<double>(hits) / static_cast<double>(n_active);
    return score;
}

std::vector<MetricRow> metric_table(const std::vector<std::pair<std::string, FittedModel>>& models,
                                    const Matrix& x_cal, const Vector& y_cal, const Matrix& x_val,
                                    const Vector& y_val, std::size_t m_max) {
    std::vector<MetricRow> rows;
    for (const auto& [name, model] : models) {
        const std::size_t top = std::min(m_max, model.n_components);
        for (std::size_t k = 1; k <= top; ++k) {
            const Vector yhat_cal = predict(model, x_cal, k);
            const Vector yhat_val = predict(model, x_val, k);
            rows.push_back({name, k, "cal", rmse(y_cal, yhat_cal), mae(y_cal, yhat_cal),
                            r_squared(y_cal, yhat_cal)});
            rows.push_back({name, k, "val", rmse(y_val, yhat_val), mae(y_val, yhat_val),
                            r_squared(y_val, yhat_val)});
        }
    }
    return rows;
}

}  // namespace dspls
