#include "dspls/sampling.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>

#include "dspls/kernels.hpp"

namespace dspls {

const char* to_string(SplitMethod method) {
    switch (method) {
        case SplitMethod::random: return "random";
        case SplitMethod::kennard_stone: return "kennard_stone";
        case SplitMethod::calvalxy: return "calvalxy";
    }
    return "unknown";
}

namespace {

Vector centroid_distances(const Matrix& X) {
    const std::size_t n = X.rows(), p = X.cols();
    Vector centroid(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) kernels::axpy(1.0, X.row(i), centroid.data(), p);
    kernels::scale(1.0 / static_cast<double>(n), centroid.data(), p);
    Vector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = kernels::dist_sq(X.row(i), centroid.data(), p);
    return d;
}

std::size_t argmax_strict(const Vector& v, const std::vector<bool>& eligible) {
    std::size_t best = v.size();
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (eligible[i] && v[i] > best_val) {
            best_val = v[i];
            best = i;
        }
    }
    return best;
}

SplitPlan finalize(std::vector<std::size_t> cal, std::size_t n, SplitMethod method,
                   std::string params) {
    std::sort(cal.begin(), cal.end());
    std::vector<bool> in_cal(n, false);
    for (std::size_t i : cal) in_cal[i] = true;
    SplitPlan plan;
    plan.calibration_idx = std::move(cal);
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_cal[i]) plan.validation_idx.push_back(i);
    }
    plan.method = method;
    plan.params = std::move(params);
    return plan;
}

}  // namespace

SplitPlan kennard_stone(const Matrix& X, std::size_t n_cal) {
    const std::size_t n = X.rows();
    if (n_cal < 1 || n_cal >= n) {
        throw std::invalid_argument("kennard_stone: need 1 <= n_cal < n_rows");
    }
    std::vector<bool> eligible(n, true);
    const Vector d0 = centroid_distances(X);
    std::size_t pick = argmax_strict(d0, eligible);
    std::vector<std::size_t> cal = {pick};
    eligible[pick] = false;

    Vector min_d(n, std::numeric_limits<double>::infinity());
    while (cal.size() < n_cal) {
        for (std::size_t i = 0; i < n; ++i) {
            if (eligible[i]) {
                min_d[i] = std::min(min_d[i], kernels::dist_sq(X.row(i), X.row(pick), X.cols()));
            }
        }
        pick = argmax_strict(min_d, eligible);
        cal.push_back(pick);
        eligible[pick] = false;
    }
    return finalize(std::move(cal), n, SplitMethod::kennard_stone,
                    "n_cal=" + std::to_string(n_cal));
}

SplitPlan calvalxy(const Matrix& X, const Vector& y, std::size_t n_cal, std::size_t n_groups) {
    const std::size_t n = X.rows();
    if (n != y.size()) throw std::invalid_argument("calvalxy: rows(X) != length(y)");
    if (n_cal < 1 || n_cal >= n) throw std::invalid_argument("calvalxy: need 1 <= n_cal < n_rows");
    if (n_groups < 1) throw std::invalid_argument("calvalxy: n_groups must be >= 1");
    if (n_groups > n) {
        throw std::invalid_argument("calvalxy: empty subset after binning; reduce n_groups");
    }

    // Equal-frequency y bins: sort by (y, index), cut into contiguous chunks.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&y](std::size_t a, std::size_t b) {
        return y[a] != y[b] ? y[a] < y[b] : a < b;
    });
    std::vector<std::size_t> subset_of(n);
    std::vector<std::size_t> subset_size(n_groups, 0);
    for (std::size_t g = 0; g < n_groups; ++g) {
        const std::size_t lo = n * g / n_groups;
        const std::size_t hi = n * (g + 1) / n_groups;
        if (lo == hi) {
            throw std::invalid_argument("calvalxy: empty subset after binning; reduce n_groups");
        }
        for (std::size_t r = lo; r < hi; ++r) subset_of[order[r]] = g;
        subset_size[g] = hi - lo;
    }

    // Proportional quotas with largest-remainder rounding (ties: lower id).
    std::vector<std::size_t> quota(n_groups, 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t g = 0; g < n_groups; ++g) {
        const double exact = static_cast<double>(n_cal) * static_cast<double>(subset_size[g]) /
                             static_cast<double>(n);
        quota[g] = static_cast<std::size_t>(exact);
        assigned += quota[g];
        remainders.emplace_back(exact - static_cast<double>(quota[g]), g);
    }
    std::sort(remainders.begin(), remainders.end(),
              [](const auto& a, const auto& b) {
                  return a.first != b.first ? a.first > b.first : a.second < b.second;
              });
    for (std::size_t i = 0; assigned < n_cal; ++i, ++assigned) {
        quota[remainders[i % remainders.size()].second] += 1;
    }

    std::vector<bool> eligible(n, true);
    const Vector d0 = centroid_distances(X);
    const std::size_t first = argmax_strict(d0, eligible);
    std::size_t s = subset_of[first];
    if (quota[s] == 0) {
        // The forced first pick lands in a zero-quota subset: borrow a slot.
        std::size_t donor = static_cast<std::size_t>(
            std::max_element(quota.begin(), quota.end()) - quota.begin());
        quota[donor] -= 1;
        quota[s] += 1;
    }
    quota[s] -= 1;
    std::vector<std::size_t> cal = {first};
    eligible[first] = false;

    Vector min_d(n, std::numeric_limits<double>::infinity());
    std::size_t last = first;
    while (cal.size() < n_cal) {
        for (std::size_t i = 0; i < n; ++i) {
            if (eligible[i]) {
                min_d[i] = std::min(min_d[i], kernels::dist_sq(X.row(i), X.row(last), X.cols()));
            }
        }
        do {
            s = (s + 1) % n_groups;
        } while (quota[s] == 0);
        std::size_t best = n;
        double best_val = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (eligible[i] && subset_of[i] == s && min_d[i] > best_val) {
                best_val = min_d[i];
                best = i;
            }
        }
        quota[s] -= 1;
        cal.push_back(best);
        eligible[best] = false;
        last = best;
    }
    return finalize(std::move(cal), n, SplitMethod::calvalxy,
                    "n_cal=" + std::to_string(n_cal) + ",n_groups=" + std::to_string(n_groups));
}

Matrix take_rows(const Matrix& X, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), X.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        std::copy(X.row(idx[i]), X.row(idx[i]) + X.cols(), out.row(i));
    }
    return out;
}

Vector take(const Vector& v, const std::vector<std::size_t>& idx) {
    Vector out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
    return out;
}

void save_split_csv(const std::string& path, const SplitPlan& plan) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "index,role\n";
    const std::size_t n = plan.calibration_idx.size() + plan.validation_idx.size();
    std::vector<bool> in_cal(n, false);
    for (std::size_t i : plan.calibration_idx) in_cal[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
        out << (i + 1) << ',' << (in_cal[i] ? "cal" : "val") << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace dspls
