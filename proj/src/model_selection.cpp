#include "dspls/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dspls/baselines.hpp"
#include "dspls/kernels.hpp"
#include "dspls/metrics.hpp"
#include "dspls/rng.hpp"

namespace dspls {

void CvPlan::validate() const {
    if (n_splits < 2) throw std::invalid_argument("CvPlan: n_splits must be >= 2");
    if (!(calibration_fraction > 0.0 && calibration_fraction < 1.0)) {
        throw std::invalid_argument("CvPlan: calibration_fraction must lie in (0, 1)");
    }
}

std::vector<SplitPlan> make_splits(const Matrix& X, const Vector& y, const CvPlan& plan) {
    plan.validate();
    const std::size_t n = X.rows();
    const std::size_t n_cal = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(plan.calibration_fraction * static_cast<double>(n))),
        1, n - 1);

    if (plan.splitter == SplitMethod::kennard_stone) {
        return std::vector<SplitPlan>(plan.n_splits, kennard_stone(X, n_cal));
    }
    if (plan.splitter == SplitMethod::calvalxy) {
        return std::vector<SplitPlan>(plan.n_splits, calvalxy(X, y, n_cal, plan.calvalxy_groups));
    }

    RandomStream rs(plan.seed);
    std::vector<SplitPlan> splits;
    std::vector<std::size_t> perm(n);
    for (std::size_t s = 0; s < plan.n_splits; ++s) {
        std::iota(perm.begin(), perm.end(), 0);
        rs.shuffle(perm);
        SplitPlan sp;
        sp.method = SplitMethod::random;
        sp.params = "seed=" + std::to_string(plan.seed) + ",split=" + std::to_string(s);
        sp.calibration_idx.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_cal));
        sp.validation_idx.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_cal), perm.end());
        std::sort(sp.calibration_idx.begin(), sp.calibration_idx.end());
        std::sort(sp.validation_idx.begin(), sp.validation_idx.end());
        splits.push_back(std::move(sp));
    }

    // Deterministic repair: when validation slots can cover all observations,
    // swap any never-validated observation into a split where it sits in
    // calibration, displacing a multiply-covered one.
    if (plan.n_splits * (n - n_cal) >= n) {
        std::vector<std::size_t> coverage(n, 0);
        for (const auto& sp : splits) {
            for (std::size_t i : sp.validation_idx) ++coverage[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (coverage[i] > 0) continue;
            for (auto& sp : splits) {
                auto cal_it =
                    std::find(sp.calibration_idx.begin(), sp.calibration_idx.end(), i);
                if (cal_it == sp.calibration_idx.end()) continue;
                auto val_it = std::find_if(
                    sp.validation_idx.begin(), sp.validation_idx.end(),
                    [&coverage](std::size_t v) { return coverage[v] >= 2; });
                if (val_it == sp.validation_idx.end()) continue;
                --coverage[*val_it];
                ++coverage[i];
                std::swap(*cal_it, *val_it);
                std::sort(sp.calibration_idx.begin(), sp.calibration_idx.end());
                std::sort(sp.validation_idx.begin(), sp.validation_idx.end());
                break;
            }
        }
    }
    return splits;
}

std::size_t pick_best_order(const CvTable& table) {
    std::size_t best = 0;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < table.mean_mse.size(); ++k) {
        if (table.n_evals[k] > 0 && table.mean_mse[k] < best_mse) {
            best_mse = table.mean_mse[k];
            best = k + 1;
        }
    }
    if (best == 0) throw std::runtime_error("pick_best_order: no order was evaluated");
    return best;
}

ComponentSelection select_components(const Matrix& X, const Vector& y, const PenaltySpec& spec,
                                     std::size_t m_max, const CvPlan& plan) {
    if (m_max < 1) throw std::invalid_argument("select_components: m_max must be >= 1");
    const auto splits = make_splits(X, y, plan);

    CvTable table;
    table.mean_mse.assign(m_max, std::numeric_limits<double>::quiet_NaN());
    table.std_mse.assign(m_max, std::numeric_limits<double>::quiet_NaN());
    table.n_evals.assign(m_max, 0);
    std::vector<double> sum(m_max, 0.0), sum_sq(m_max, 0.0);

    for (const auto& split : splits) {
        const Matrix x_cal = take_rows(X, split.calibration_idx);
        const Vector y_cal = take(y, split.calibration_idx);
        const Matrix x_val = take_rows(X, split.validation_idx);
        const Vector y_val = take(y, split.validation_idx);
        const std::size_t m_fit = std::min({m_max, x_cal.rows() - 1, x_cal.cols()});
        const FittedModel model = fit(x_cal, y_cal, spec, m_fit);
        for (std::size_t k = 1; k <= model.n_components; ++k) {
            const double v = mse(y_val, predict(model, x_val, k));
            sum[k - 1] += v;
            sum_sq[k - 1] += v * v;
            table.n_evals[k - 1] += 1;
        }
    }
    for (std::size_t k = 0; k < m_max; ++k) {
        if (table.n_evals[k] == 0) continue;
        const double c = static_cast<double>(table.n_evals[k]);
        table.mean_mse[k] = sum[k] / c;
        const double var = std::max(0.0, sum_sq[k] / c - table.mean_mse[k] * table.mean_mse[k]);
        table.std_mse[k] = std::sqrt(var);
    }

    ComponentSelection out;
    out.best_order = pick_best_order(table);
    out.table = std::move(table);
    return out;
}

double select_hyperparameter(const Matrix& X, const Vector& y, BaselineMethod method,
                             const std::vector<double>& grid, const CvPlan& plan) {
    if (grid.empty()) throw std::invalid_argument("select_hyperparameter: empty grid");
    for (double t : grid) {
        if (!(t > 0.0)) throw std::invalid_argument("select_hyperparameter: grid must be > 0");
    }
    const auto splits = make_splits(X, y, plan);

    std::vector<double> mean(grid.size(), 0.0);
    for (const auto& split : splits) {
        const auto [x_cal, col_means] = mean_center(take_rows(X, split.calibration_idx));
        const auto [y_cal, y_mean] = mean_center(take(y, split.calibration_idx));
        const Matrix x_val = take_rows(X, split.validation_idx);
        const Vector y_val = take(y, split.validation_idx);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const Vector beta = method == BaselineMethod::ridge
                                    ? ridge_fit(x_cal, y_cal, grid[g])
                                    : lasso_fit(x_cal, y_cal, grid[g]);
            Vector yhat(x_val.rows());
            const double offset =
                y_mean - kernels::dot(col_means.data(), beta.data(), beta.size());
            for (std::size_t i = 0; i < x_val.rows(); ++i) {
                yhat[i] = offset + kernels::dot(x_val.row(i), beta.data(), beta.size());
            }
            mean[g] += mse(y_val, yhat) / static_cast<double>(splits.size());
        }
    }

    double best_t = grid[0], best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (mean[g] < best_mse || (mean[g] == best_mse && grid[g] < best_t)) {
            best_mse = mean[g];
            best_t = grid[g];
        }
    }
    return best_t;
}

}  // namespace dspls
