#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dspls/metrics.hpp"
#include "dspls/penalties.hpp"
#include "test_util.hpp"

using namespace dspls;
using namespace dspls::testing;

TEST_CASE("adaptive_threshold is the ceil(varsigma*P)-th order statistic") {
    const Vector mags = {5.0, 1.0, 3.0, 2.0, 4.0};
    CHECK(adaptive_threshold(mags, ShrinkRatio(0.8)) == doctest::Approx(4.0));
    CHECK(adaptive_threshold(mags, ShrinkRatio(0.0)) == 0.0);

    // Quantile oracle by full sort on random magnitudes.
    Vector r = random_vector(101, 17);
    for (double& v : r) v = std::fabs(v);
    Vector sorted = r;
    std::sort(sorted.begin(), sorted.end());
    for (double s : {0.1, 0.5, 0.77, 0.99}) {
        const auto k = static_cast<std::size_t>(std::ceil(s * 101.0));
        CHECK(adaptive_threshold(r, ShrinkRatio(s)) == sorted[k - 1]);
    }

    CHECK_THROWS_AS(adaptive_threshold(Vector(4, 0.0), ShrinkRatio(0.5)), DegenerateThreshold);
    CHECK_THROWS_AS(ShrinkRatio(1.0), std::invalid_argument);
    CHECK_THROWS_AS(ShrinkRatio(-0.1), std::invalid_argument);
}

TEST_CASE("tied magnitudes saturate the threshold") {
    const Vector all_equal(6, 2.5);
    CHECK(adaptive_threshold(all_equal, ShrinkRatio(0.5)) == doctest::Approx(2.5));
    Vector z(6, 2.5);
    CHECK_THROWS_AS(lasso_weight(z, ShrinkRatio(0.5)), DegenerateThreshold);
}

TEST_CASE("soft_threshold") {
    const Vector z = {3.0, -1.0, 0.5};
    const Vector out = soft_threshold(z, 1.0);
    CHECK(out[0] == doctest::Approx(2.0));
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.0);

    const Vector id = soft_threshold(z, 0.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(id[i] == z[i]);

    // Support count: survivors plus |z_p| <= nu equals P.
    const Vector r = random_vector(200, 8);
    for (double nu : {0.1, 0.5, 1.3}) {
        const Vector t = soft_threshold(r, nu);
        std::size_t below = 0;
        for (double v : r) {
            if (std::fabs(v) <= nu) ++below;
        }
        CHECK(l0(t) + below == 200);
    }
}

TEST_CASE("lasso_weight hand-checked example") {
    const auto [w, log] = lasso_weight({3.0, -1.0, 0.5}, ShrinkRatio(2.0 / 3.0));
    CHECK(log.nu == doctest::Approx(1.0));
    CHECK(log.mu == doctest::Approx(2.0));
    CHECK(log.lambda == doctest::Approx(0.5));
    CHECK(w[0] == doctest::Approx(2.0 / 3.0));
    CHECK(w[1] == 0.0);
    CHECK(w[2] == 0.0);
    // Omega(w) = lambda |w|_1 + |w|_2 = 1.
    CHECK(std::fabs(log.lambda * norm_l1(w) + norm_l2(w) - 1.0) < 1e-10);
}

TEST_CASE("threshold logs satisfy lambda * mu = nu") {
    const Matrix x = mean_center(random_matrix(30, 10, 25)).values;
    const Vector y = random_vector(30, 26);
    const Vector z = matvec_transposed(x, y);
    const std::vector<ThresholdLog> logs = {
        lasso_weight(z, ShrinkRatio(0.5)).log,
        ls_weight(x, z, ShrinkRatio(0.5)).log,
        ridge_weight(x, z, ShrinkRatio(0.5), RidgeParams{0.3}).log,
    };
    for (const auto& log : logs) {
        CHECK(std::fabs(log.lambda * log.mu - log.nu) <= 1e-12 * (1.0 + std::fabs(log.nu)));
    }
}

TEST_CASE("group partitions validate shape and occupancy") {
    const auto part = GroupPartition::contiguous_blocks(10, 3);
    CHECK(part.members().size() == 3);
    CHECK_NOTHROW(part.validate(10));
    CHECK_THROWS_AS(part.validate(9), std::invalid_argument);

    GroupPartition gappy;
    gappy.n_groups = 3;
    gappy.group_of = {0, 0, 2, 2};  // group 2 empty
    CHECK_THROWS_AS(gappy.validate(4), std::invalid_argument);
    CHECK_THROWS_AS(GroupPartition::contiguous_blocks(4, 5), std::invalid_argument);
}

TEST_CASE("lasso_weight with zero shrinkage is the PLS direction") {
    const Vector z = random_vector(30, 3);
    const auto [w, log] = lasso_weight(z, ShrinkRatio(0.0));
    const double nrm = norm_l2(z);
    for (std::size_t i = 0; i < z.size(); ++i) {
        CHECK(w[i] == doctest::Approx(z[i] / nrm).epsilon(1e-12));
    }
    CHECK(log.nu == 0.0);
}

TEST_CASE("lasso_weight properties: sparsity, collinearity, orthant, monotonicity") {
    const Vector z = random_vector(50, 21);
    std::size_t prev_l0 = 51;
    for (double s : {0.0, 0.3, 0.5, 0.8, 0.9}) {
        const auto [w, log] = lasso_weight(z, ShrinkRatio(s));
        const auto k = static_cast<std::size_t>(std::ceil(s * 50.0));
        CHECK(l0(w) == 50 - k);  // distinct magnitudes almost surely
        CHECK(l0(w) <= prev_l0);
        prev_l0 = l0(w);
        // Collinear with the thresholded vector, same orthant as z.
        const Vector znu = soft_threshold(z, log.nu);
        const double ratio = log.mu / (log.nu * norm_l1(znu) + log.mu * log.mu);
        for (std::size_t i = 0; i < z.size(); ++i) {
            CHECK(w[i] * z[i] >= 0.0);
            CHECK(w[i] == doctest::Approx(ratio * znu[i]).epsilon(1e-12));
        }
        CHECK(std::fabs(log.lambda * norm_l1(w) + norm_l2(w) - 1.0) < 1e-10);
    }
}

TEST_CASE("lasso_weight maximizes z^T u over the penalty sphere (Monte-Carlo)") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Vector z = random_vector(5, seed);
        const auto [w, log] = lasso_weight(z, ShrinkRatio(0.4));
        const auto report =
            check_dual_optimality(z, w, PenaltyNorm::lasso(log.lambda), 10000, seed);
        CHECK(report.max_gap <= 1e-9);
    }
}

TEST_CASE("check_dual_optimality flags a corrupted solution") {
    const Vector z = random_vector(4, 77);
    auto [w, log] = lasso_weight(z, ShrinkRatio(0.4));
    const PenaltyNorm norm = PenaltyNorm::lasso(log.lambda);

    // l2 case: w = z/|z| is optimal by Cauchy-Schwarz.
    Vector unit = z;
    kernels::scale(1.0 / norm_l2(z), unit.data(), unit.size());
    CHECK(check_dual_optimality(z, unit, PenaltyNorm::l2(), 2000, 5).max_gap <= 1e-9);

    // Flip the sign of one survivor and renormalize: strictly suboptimal.
    Vector bad = w;
    for (double& v : bad) {
        if (v != 0.0) {
            v = -v;
            break;
        }
    }
    kernels::scale(1.0 / norm(bad), bad.data(), bad.size());
    CHECK(check_dual_optimality(z, bad, norm, 10000, 6).max_gap > 1e-6);
}

TEST_CASE("group_lasso_weight with one group reduces to lasso_weight") {
    const Matrix x = random_matrix(25, 12, 30);
    const auto [xc, xm] = mean_center(x);
    const Vector y = random_vector(25, 31);
    const Vector z = matvec_transposed(xc, y);

    const auto part = GroupPartition::contiguous_blocks(12, 1);
    const auto grp =
        group_lasso_weight(z, part, {ShrinkRatio(0.5)}, CalibrationContext{xc, y});
    const auto las = lasso_weight(z, ShrinkRatio(0.5));
    CHECK(max_abs_diff(grp.w, las.w) < 1e-12);
    CHECK(grp.logs.size() == 1);
    CHECK(grp.logs[0].nu == doctest::Approx(las.log.nu));
}

TEST_CASE("a group with zero signal stays zero") {
    Matrix x = random_matrix(20, 6, 40);
    const auto xc = mean_center(x).values;
    const Vector y = random_vector(20, 41);
    Vector z = matvec_transposed(xc, y);
    for (std::size_t i = 3; i < 6; ++i) z[i] = 0.0;  // group 2 sees nothing

    const auto part = GroupPartition::contiguous_blocks(6, 2);
    const auto res = group_lasso_weight(z, part, {ShrinkRatio(0.3), ShrinkRatio(0.3)},
                                        CalibrationContext{xc, y});
    for (std::size_t i = 3; i < 6; ++i) CHECK(res.w[i] == 0.0);
    CHECK(l0(res.w) > 0);
}

TEST_CASE("group grid search matches a brute-force re-evaluation") {
    // P=6, G=2: re-enumerate every combination independently and confirm the
    // solver's pick attains the minimal calibration MSE.
    const Matrix x0 = random_matrix(18, 6, 50);
    const auto xc = mean_center(x0).values;
    const Vector y = random_vector(18, 51);
    const Vector z = matvec_transposed(xc, y);
    const auto part = GroupPartition::contiguous_blocks(6, 2);
    const std::vector<ShrinkRatio> vs = {ShrinkRatio(0.3), ShrinkRatio(0.3)};
    const auto res = group_lasso_weight(z, part, vs, CalibrationContext{xc, y});

    // Independent oracle path: direct thresholds, direct candidate scoring.
    const Vector z1 = {z[0], z[1], z[2]}, z2 = {z[3], z[4], z[5]};
    auto absv = [](Vector v) {
        for (double& a : v) a = std::fabs(a);
        return v;
    };
    const double nu1 = adaptive_threshold(absv(z1), vs[0]);
    const double nu2 = adaptive_threshold(absv(z2), vs[1]);
    const Vector znu1 = soft_threshold(z1, nu1), znu2 = soft_threshold(z2, nu2);
    const double mu = norm_l2(znu1) + norm_l2(znu2);
    const double l1_ = nu1 / norm_l2(znu1), l2_ = nu2 / norm_l2(znu2);
    const double cmax1 = mu / (norm_l2(znu1) + l1_ * norm_l1(znu1));
    const double cmax2 = mu / (norm_l2(znu2) + l2_ * norm_l1(znu2));

    double best = 1e300;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double c1 = cmax1 * i / 9.0, c2 = cmax2 * j / 9.0;
            Vector w(6, 0.0);
            for (std::size_t q = 0; q < 3; ++q) {
                w[q] = c1 * znu1[q] / norm_l2(znu1);
                w[q + 3] = c2 * znu2[q] / norm_l2(znu2);
            }
            const Vector t = matvec(xc, w);
            const double tt = kernels::sum_sq(t.data(), t.size());
            if (tt == 0.0) continue;
            const double ty = kernels::dot(t.data(), y.data(), t.size());
            double rss = 0.0;
            for (std::size_t q = 0; q < t.size(); ++q) {
                const double r = y[q] - t[q] * (ty / tt);
                rss += r * r;
            }
            best = std::min(best, rss);
        }
    }

    // MSE of the solver's pick (reconstruct its unscaled score direction).
    const Vector t = matvec(xc, res.w);
    const double tt = kernels::sum_sq(t.data(), t.size());
    const double ty = kernels::dot(t.data(), y.data(), t.size());
    double rss = 0.0;
    for (std::size_t q = 0; q < t.size(); ++q) {
        const double r = y[q] - t[q] * (ty / tt);
        rss += r * r;
    }
    CHECK(rss == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("ls_weight on an orthonormal design reduces to the lasso direction") {
    const Matrix q = orthonormal_columns(40, 10, 60);
    const Vector y = random_vector(40, 61);
    const Vector z = matvec_transposed(q, y);

    const auto ls = ls_weight(q, z, ShrinkRatio(0.5));
    const auto las = lasso_weight(z, ShrinkRatio(0.5));
    // Same direction; the LS solver normalizes to unit l2 instead.
    Vector las_unit = las.w;
    kernels::scale(1.0 / norm_l2(las.w), las_unit.data(), las_unit.size());
    CHECK(max_abs_diff(ls.w, las_unit) < 1e-8);

    const auto ls0 = ls_weight(q, z, ShrinkRatio(0.0));
    Vector z_unit = z;
    kernels::scale(1.0 / norm_l2(z), z_unit.data(), z_unit.size());
    CHECK(max_abs_diff(ls0.w, z_unit) < 1e-8);
}

TEST_CASE("ls_weight support is contained in the thresholded LS support") {
    const Matrix x = mean_center(random_matrix(200, 50, 70)).values;
    const Vector y = random_vector(200, 71);
    const Vector z = matvec_transposed(x, y);
    const auto res = ls_weight(x, z, ShrinkRatio(0.6));

    const Vector beta_ls = solve_spd(gram(x), z);
    const Vector znu = soft_threshold(beta_ls, res.log.nu);
    for (std::size_t i = 0; i < res.w.size(); ++i) {
        if (res.w[i] != 0.0) CHECK(znu[i] != 0.0);
    }
    CHECK(norm_l2(res.w) == doctest::Approx(1.0));
}

TEST_CASE("ridge_weight with nu2 = 0 equals lasso_weight") {
    const Matrix x = mean_center(random_matrix(30, 8, 80)).values;
    const Vector y = random_vector(30, 81);
    const Vector z = matvec_transposed(x, y);
    const auto rid = ridge_weight(x, z, ShrinkRatio(0.5), RidgeParams{0.0});
    const auto las = lasso_weight(z, ShrinkRatio(0.5));
    CHECK(max_abs_diff(rid.w, las.w) < 1e-12);
}

TEST_CASE("ridge_weight closed form on an orthonormal design") {
    const Matrix q = orthonormal_columns(40, 10, 90);
    const Vector y = random_vector(40, 91);
    const Vector z = matvec_transposed(q, y);
    const double nu2 = 50.0;
    const auto rid = ridge_weight(q, z, ShrinkRatio(0.5), RidgeParams{nu2});

    // (nu2 I + I)^{-1} z = z / (1 + nu2): same survivor set as the lasso.
    const auto las = lasso_weight(z, ShrinkRatio(0.5));
    for (std::size_t i = 0; i < z.size(); ++i) {
        CHECK((rid.w[i] != 0.0) == (las.w[i] != 0.0));
    }
    CHECK(rid.log.nu == doctest::Approx(las.log.nu / (1.0 + nu2)));
}

TEST_CASE("ridge_weight succeeds on singular designs") {
    // P > N: X^T X is singular but nu2 X^T X + I is SPD.
    const Matrix x = mean_center(random_matrix(10, 25, 95)).values;
    const Vector y = random_vector(10, 96);
    const Vector z = matvec_transposed(x, y);
    CHECK_THROWS_AS(ls_weight(x, z, ShrinkRatio(0.5)), SingularMatrix);
    const auto rid = ridge_weight(x, z, ShrinkRatio(0.5), RidgeParams{2.0});
    CHECK(l0(rid.w) > 0);
}

TEST_CASE("ridge solution is dual-optimal in the whitened coordinates") {
    // The pseudo-ridge closed form thresholds the transformed vector
    // z_X = (nu2 X^T X + I)^{-1} z, so its exact optimality certificate is
    // the lasso-type one in those coordinates.
    const Matrix x = mean_center(random_matrix(12, 5, 97)).values;
    const Vector y = random_vector(12, 98);
    const Vector z = matvec_transposed(x, y);
    const double nu2 = 0.8;
    const auto rid = ridge_weight(x, z, ShrinkRatio(0.4), RidgeParams{nu2});

    Matrix a = gram(x);
    kernels::scale(nu2, a.data(), a.size());
    for (std::size_t i = 0; i < 5; ++i) a(i, i) += 1.0;
    const Vector z_x = solve_spd(a, z);

    const PenaltyNorm norm = PenaltyNorm::lasso(rid.log.lambda);
    Vector w = rid.w;
    kernels::scale(1.0 / norm(w), w.data(), w.size());
    const auto report = check_dual_optimality(z_x, w, norm, 10000, 7);
    CHECK(report.max_gap <= 1e-9);

    // The full ridge norm is still exactly 1 at the solution.
    const double lambda2 = nu2 * norm_l2(matvec(x, rid.w)) / norm_l2(rid.w);
    const double omega = PenaltyNorm::ridge(rid.log.lambda, lambda2, x)(rid.w);
    CHECK(std::fabs(omega - 1.0) <= 1e-10);
}
