#include "dspls/penalties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dspls/kernels.hpp"
#include "dspls/rng.hpp"

namespace dspls {

ShrinkRatio::ShrinkRatio(double value) : value_(value) {
    if (!(value >= 0.0 && value < 1.0)) {
        throw std::invalid_argument("ShrinkRatio: value must lie in [0, 1), got " +
                                    std::to_string(value));
    }
}

GroupPartition GroupPartition::contiguous_blocks(std::size_t n_vars, int n_groups) {
    if (n_groups < 1 || static_cast<std::size_t>(n_groups) > n_vars) {
        throw std::invalid_argument("GroupPartition: need 1 <= n_groups <= n_vars");
    }
    GroupPartition part;
    part.n_groups = n_groups;
    part.group_of.resize(n_vars);
    for (std::size_t p = 0; p < n_vars; ++p) {
        part.group_of[p] = static_cast<int>(p * static_cast<std::size_t>(n_groups) / n_vars);
    }
    return part;
}

void GroupPartition::validate(std::size_t n_vars) const {
    if (group_of.size() != n_vars) {
        throw std::invalid_argument("GroupPartition: size does not match variable count");
    }
    if (n_groups < 1) throw std::invalid_argument("GroupPartition: n_groups < 1");
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_groups), 0);
    for (int g : group_of) {
        if (g < 0 || g >= n_groups) throw std::invalid_argument("GroupPartition: id out of range");
        ++counts[static_cast<std::size_t>(g)];
    }
    for (std::size_t g = 0; g < counts.size(); ++g) {
        if (counts[g] == 0) {
            throw std::invalid_argument("GroupPartition: group " + std::to_string(g + 1) +
                                        " is empty");
        }
    }
}

std::vector<std::vector<std::size_t>> GroupPartition::members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(n_groups));
    for (std::size_t p = 0; p < group_of.size(); ++p) {
        out[static_cast<std::size_t>(group_of[p])].push_back(p);
    }
    return out;
}

double adaptive_threshold(const Vector& z_abs, ShrinkRatio varsigma) {
    const std::size_t p = z_abs.size();
    if (p == 0) throw std::invalid_argument("adaptive_threshold: empty vector");
    bool any_nonzero = false;
    for (double v : z_abs) {
        if (v < 0.0) throw std::invalid_argument("adaptive_threshold: negative magnitude");
        any_nonzero = any_nonzero || v > 0.0;
    }
    if (!any_nonzero) {
        throw DegenerateThreshold("adaptive_threshold: all magnitudes are zero");
    }
    const std::size_t k =
        static_cast<std::size_t>(std::ceil(varsigma.value() * static_cast<double>(p)));
    if (k == 0) return 0.0;
    Vector sorted(z_abs);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     sorted.end());
    return sorted[k - 1];
}

Vector soft_threshold(const Vector& z, double nu) {
    if (nu < 0.0) throw std::invalid_argument("soft_threshold: nu must be >= 0");
    Vector out(z.size());
    kernels::soft_threshold(z.data(), nu, out.data(), z.size());
    return out;
}

WeightResult lasso_weight(const Vector& z, ShrinkRatio varsigma) {
    Vector z_abs(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) z_abs[i] = std::fabs(z[i]);
    const double nu = adaptive_threshold(z_abs, varsigma);
    Vector z_nu = soft_threshold(z, nu);
    const double mu = norm_l2(z_nu);
    if (!(mu > 0.0)) {
        throw DegenerateThreshold("lasso_weight: threshold " + std::to_string(nu) +
                                  " zeroed every coordinate");
    }
    const double denom = nu * norm_l1(z_nu) + mu * mu;
    kernels::scale(mu / denom, z_nu.data(), z_nu.size());
    return {std::move(z_nu), {nu, mu, nu / mu}};
}

namespace {

Vector subvector(const Vector& z, const std::vector<std::size_t>& idx) {
    Vector out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = z[idx[i]];
    return out;
}

}  // namespace

GroupWeightResult group_lasso_weight(const Vector& z, const GroupPartition& partition,
                                     const std::vector<ShrinkRatio>& varsigma_per_group,
                                     const CalibrationContext& context) {
    const std::size_t p = z.size();
    partition.validate(p);
    const std::size_t n_groups = static_cast<std::size_t>(partition.n_groups);
    if (varsigma_per_group.size() != n_groups) {
        throw std::invalid_argument("group_lasso_weight: one shrink ratio per group required");
    }
    if (context.X.cols() != p) {
        throw std::invalid_argument("group_lasso_weight: context width mismatch");
    }
    const auto groups = partition.members();

    // Per-group thresholding. A group whose z block is entirely zero stays
    // zero; a nonzero group that thresholds to zero is degenerate.
    std::vector<Vector> z_nu(n_groups);
    std::vector<double> nu(n_groups, 0.0), block_l1(n_groups, 0.0), block_l2(n_groups, 0.0);
    double mu = 0.0;
    for (std::size_t g = 0; g < n_groups; ++g) {
        Vector zg = subvector(z, groups[g]);
        Vector zg_abs(zg.size());
        for (std::size_t i = 0; i < zg.size(); ++i) zg_abs[i] = std::fabs(zg[i]);
        if (kernels::sum(zg_abs.data(), zg_abs.size()) == 0.0) {
            z_nu[g].assign(zg.size(), 0.0);
            continue;
        }
        nu[g] = adaptive_threshold(zg_abs, varsigma_per_group[g]);
        z_nu[g] = soft_threshold(zg, nu[g]);
        block_l1[g] = norm_l1(z_nu[g]);
        block_l2[g] = norm_l2(z_nu[g]);
        if (!(block_l2[g] > 0.0)) {
            throw DegenerateThreshold("group_lasso_weight: group " + std::to_string(g + 1) +
                                      " lost every coordinate");
        }
        mu += block_l2[g];
    }
    if (!(mu > 0.0)) throw DegenerateThreshold("group_lasso_weight: all groups are zero");

    // lambda_g = nu_g / (alpha_g mu) = nu_g / |z_nu_g|_2, and the single-group
    // magnitude cap is mu / (|z_nu_g|_2 + lambda_g |z_nu_g|_1).
    std::vector<double> alpha(n_groups, 0.0), lambda(n_groups, 0.0);
    std::vector<std::size_t> active;
    for (std::size_t g = 0; g < n_groups; ++g) {
        if (block_l2[g] > 0.0) {
            alpha[g] = block_l2[g] / mu;
            lambda[g] = nu[g] / block_l2[g];
            active.push_back(g);
        }
    }

    // Scores of the per-group unit directions; candidate scores are their
    // nonnegative combinations, so the search only needs this small Gram.
    const std::size_t n_active = active.size();
    std::vector<Vector> unit_dir(n_active);
    std::vector<Vector> unit_score(n_active);
    Matrix score_gram(n_active, n_active);
    Vector score_y(n_active);
    for (std::size_t a = 0; a < n_active; ++a) {
        const std::size_t g = active[a];
        Vector dir(p, 0.0);
        const auto& idx = groups[g];
        for (std::size_t i = 0; i < idx.size(); ++i) dir[idx[i]] = z_nu[g][i] / block_l2[g];
        unit_score[a] = matvec(context.X, dir);
        unit_dir[a] = std::move(dir);
        score_y[a] = kernels::dot(unit_score[a].data(), context.y.data(), unit_score[a].size());
        for (std::size_t b = 0; b <= a; ++b) {
            score_gram(a, b) = score_gram(b, a) =
                kernels::dot(unit_score[a].data(), unit_score[b].data(), unit_score[a].size());
        }
    }

    constexpr std::size_t kGridPoints = 10;
    // 10^G combinations are enumerated per component; keep that tractable.
    if (n_active > 6) {
        throw std::invalid_argument("group_lasso_weight: grid search over " +
                                    std::to_string(n_active) +
                                    " active groups is infeasible; use at most 6");
    }
    std::vector<Vector> grid(n_active);
    for (std::size_t a = 0; a < n_active; ++a) {
        const std::size_t g = active[a];
        const double cmax = mu / (block_l2[g] + lambda[g] * block_l1[g]);
        grid[a].resize(kGridPoints);
        for (std::size_t i = 0; i < kGridPoints; ++i) {
            grid[a][i] = cmax * static_cast<double>(i) / static_cast<double>(kGridPoints - 1);
        }
    }

    // Exhaustive search over all combinations, lexicographic order with the
    // last group varying fastest; strict improvement keeps the earliest tie.
    std::vector<std::size_t> pick(n_active, 0), best_pick;
    double best_rss = std::numeric_limits<double>::infinity();
    const double y_ss = kernels::sum_sq(context.y.data(), context.y.size());
    while (true) {
        double tt = 0.0, ty = 0.0;
        for (std::size_t a = 0; a < n_active; ++a) {
            const double ca = grid[a][pick[a]];
            if (ca == 0.0) continue;
            ty += ca * score_y[a];
            tt += ca * ca * score_gram(a, a);
            for (std::size_t b = 0; b < a; ++b) tt += 2.0 * ca * grid[b][pick[b]] * score_gram(a, b);
        }
        if (tt > 0.0) {
            const double rss = y_ss - ty * ty / tt;
            if (rss < best_rss) {
                best_rss = rss;
                best_pick = pick;
            }
        }
        bool wrapped = true;
        std::size_t a = n_active;
        while (a-- > 0) {
            if (++pick[a] < kGridPoints) {
                wrapped = false;
                break;
            }
            pick[a] = 0;
        }
        if (wrapped) break;
    }
    if (best_pick.empty()) {
        throw EmptyGrid("group_lasso_weight: no grid combination yields a nonzero weight");
    }

    Vector w(p, 0.0);
    for (std::size_t a = 0; a < n_active; ++a) {
        const double ca = grid[a][best_pick[a]];
        if (ca != 0.0) kernels::axpy(ca, unit_dir[a].data(), w.data(), p);
    }
    // Rescale to Omega(w) = sum_g alpha_g (|w_g|_2 + lambda_g |w_g|_1) = 1.
    double omega = 0.0;
    for (std::size_t a = 0; a < n_active; ++a) {
        const std::size_t g = active[a];
        const Vector wg = subvector(w, groups[g]);
        omega += alpha[g] * (norm_l2(wg) + lambda[g] * norm_l1(wg));
    }
    kernels::scale(1.0 / omega, w.data(), p);

    GroupWeightResult out;
    out.w = std::move(w);
    out.logs.resize(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) out.logs[g] = {nu[g], block_l2[g], lambda[g]};
    return out;
}

WeightResult ls_weight(const CholeskyFactor& gram_factor, const Vector& z, ShrinkRatio varsigma) {
    Vector beta_ls = gram_factor.solve(z);
    Vector beta_abs(beta_ls.size());
    for (std::size_t i = 0; i < beta_ls.size(); ++i) beta_abs[i] = std::fabs(beta_ls[i]);
    const double nu = adaptive_threshold(beta_abs, varsigma);
    Vector z_nu = soft_threshold(beta_ls, nu);
    const double mu = norm_l2(z_nu);
    if (!(mu > 0.0)) {
        throw DegenerateThreshold("ls_weight: threshold zeroed every coordinate");
    }
    kernels::scale(1.0 / mu, z_nu.data(), z_nu.size());
    return {std::move(z_nu), {nu, mu, nu / mu}};
}

WeightResult ls_weight(const Matrix& X, const Vector& z, ShrinkRatio varsigma) {
    return ls_weight(CholeskyFactor(gram(X)), z, varsigma);
}

WeightResult ridge_weight(const Matrix& X, const CholeskyFactor& perturbed_gram_factor,
                          const Vector& z, ShrinkRatio varsigma, RidgeParams params) {
    if (params.nu2 < 0.0) throw std::invalid_argument("ridge_weight: nu2 must be >= 0");
    Vector z_x = perturbed_gram_factor.solve(z);
    Vector z_x_abs(z_x.size());
    for (std::size_t i = 0; i < z_x.size(); ++i) z_x_abs[i] = std::fabs(z_x[i]);
    const double nu1 = adaptive_threshold(z_x_abs, varsigma);
    Vector z_nu = soft_threshold(z_x, nu1);
    const double mu = norm_l2(z_nu);
    if (!(mu > 0.0)) {
        throw DegenerateThreshold("ridge_weight: threshold zeroed every coordinate");
    }
    const Vector x_znu = matvec(X, z_nu);
    const double denom =
        nu1 * norm_l1(z_nu) + params.nu2 * kernels::sum_sq(x_znu.data(), x_znu.size()) + mu * mu;
    kernels::scale(mu / denom, z_nu.data(), z_nu.size());
    return {std::move(z_nu), {nu1, mu, nu1 / mu}};
}

WeightResult ridge_weight(const Matrix& X, const Vector& z, ShrinkRatio varsigma,
                          RidgeParams params) {
    Matrix a = gram(X);
    kernels::scale(params.nu2, a.data(), a.size());
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += 1.0;
    return ridge_weight(X, CholeskyFactor(std::move(a)), z, varsigma, params);
}

PenaltyNorm PenaltyNorm::l2() {
    PenaltyNorm n;
    n.eval_ = [](const Vector& v) { return norm_l2(v); };
    return n;
}

PenaltyNorm PenaltyNorm::lasso(double lambda) {
    PenaltyNorm n;
    n.eval_ = [lambda](const Vector& v) { return lambda * norm_l1(v) + norm_l2(v); };
    return n;
}

PenaltyNorm PenaltyNorm::group(GroupPartition partition, Vector alpha, Vector lambda) {
    PenaltyNorm n;
    n.eval_ = [partition = std::move(partition), alpha = std::move(alpha),
               lambda = std::move(lambda)](const Vector& v) {
        const auto groups = partition.members();
        double omega = 0.0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            Vector vg = subvector(v, groups[g]);
            omega += alpha[g] * (norm_l2(vg) + lambda[g] * norm_l1(vg));
        }
        return omega;
    };
    return n;
}

PenaltyNorm PenaltyNorm::ridge(double lambda1, double lambda2, const Matrix& X) {
    PenaltyNorm n;
    n.eval_ = [lambda1, lambda2, &X](const Vector& v) {
        return lambda1 * norm_l1(v) + lambda2 * norm_l2(matvec(X, v)) + norm_l2(v);
    };
    return n;
}

DualityReport check_dual_optimality(const Vector& z, const Vector& w, const PenaltyNorm& omega,
                                    std::size_t trials, std::uint64_t seed) {
    if (z.size() != w.size()) throw std::invalid_argument("check_dual_optimality: size mismatch");
    const double omega_w = omega(w);
    if (std::fabs(omega_w - 1.0) > 1e-8) {
        throw std::invalid_argument("check_dual_optimality: Omega(w) = " +
                                    std::to_string(omega_w) + ", expected 1");
    }
    const double zw = kernels::dot(z.data(), w.data(), z.size());
    RandomStream rs(seed);
    DualityReport report;
    report.trials = trials;
    report.max_gap = -std::numeric_limits<double>::infinity();
    Vector u(z.size());
    for (std::size_t t = 0; t < trials; ++t) {
        const bool sparse = rs.uniform01() < 0.5;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] == 0.0) {
                u[i] = 0.0;
                continue;
            }
            double m = std::fabs(rs.normal());
            if (sparse && rs.uniform01() < 0.5) m = 0.0;
            u[i] = std::copysign(m, z[i]);
        }
        const double o = omega(u);
        if (!(o > 0.0)) continue;
        kernels::scale(1.0 / o, u.data(), u.size());
        report.max_gap = std::max(report.max_gap, kernels::dot(z.data(), u.data(), u.size()) - zw);
    }
    return report;
}

}  // namespace dspls
