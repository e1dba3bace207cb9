#include "dspls/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dspls/kernels.hpp"
#include "dspls/rng.hpp"

namespace dspls {

void SimulationRecipe::validate() const {
    if (n_obs < 2) throw std::invalid_argument("recipe: n_obs must be >= 2");
    if (n_vars < 1) throw std::invalid_argument("recipe: n_vars must be >= 1");
    if (n_peaks < 1) throw std::invalid_argument("recipe: n_peaks must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("recipe: sigma must be > 0");
    if (!(amp_min > 0.0) || amp_max < amp_min) {
        throw std::invalid_argument("recipe: need 0 < amp_min <= amp_max");
    }
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw std::invalid_argument("recipe: noise_sd must be finite and >= 0");
    }
    if (active_set.empty()) throw std::invalid_argument("recipe: active_set is empty");
    for (const auto& r : active_set) {
        if (r.first < 1 || r.last < r.first || r.last > n_vars) {
            throw std::invalid_argument("recipe: active range outside [1, n_vars]");
        }
    }
    if (!response_weights.empty()) {
        if (response_weights.size() != active_indices().size()) {
            throw std::invalid_argument("recipe: one response weight per active index required");
        }
        for (double w : response_weights) {
            if (!(w > 0.0)) throw std::invalid_argument("recipe: weights must be positive");
        }
    }
}

std::vector<std::size_t> SimulationRecipe::active_indices() const {
    std::vector<std::size_t> idx;
    for (const auto& r : active_set) {
        for (std::size_t p = r.first; p <= r.last; ++p) idx.push_back(p - 1);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

SimulatedDataset simulate(const SimulationRecipe& recipe) {
    recipe.validate();
    const std::size_t n = recipe.n_obs, p = recipe.n_vars, k = recipe.n_peaks;
    RandomStream rs(recipe.seed);

    Matrix amp(n, k), loc(n, k);
    for (std::size_t i = 0; i < n * k; ++i) {
        amp.data()[i] = rs.uniform(recipe.amp_min, recipe.amp_max);
    }
    for (std::size_t i = 0; i < n * k; ++i) {
        loc.data()[i] = rs.uniform(1.0, static_cast<double>(p));
    }

    Matrix x(n, p);
    const double inv_two_sigma_sq = 1.0 / (2.0 * recipe.sigma * recipe.sigma);
    for (std::size_t i = 0; i < n; ++i) {
        double* row = x.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            const double a = amp(i, j), mu = loc(i, j);
            for (std::size_t q = 0; q < p; ++q) {
                const double d = static_cast<double>(q + 1) - mu;
                row[q] += a * std::exp(-d * d * inv_two_sigma_sq);
            }
        }
    }
    if (recipe.noise_sd > 0.0) {
        for (std::size_t i = 0; i < n * p; ++i) x.data()[i] += rs.normal(recipe.noise_sd);
    }

    const auto active = recipe.active_indices();
    Vector weights = recipe.response_weights;
    if (weights.empty()) {
        weights.resize(active.size());
        for (double& w : weights) w = rs.uniform(0.5, 1.5);
    }
    Vector beta(p, 0.0);
    for (std::size_t i = 0; i < active.size(); ++i) beta[active[i]] = weights[i];

    // The linear model holds over the observed (noisy) X.
    Vector y = matvec(x, beta);
    if (recipe.noise_sd > 0.0) {
        for (double& v : y) v += rs.normal(recipe.noise_sd);
    }

    return {std::move(x), std::move(y), recipe, std::move(beta)};
}

SimulationRecipe dsim_recipe(std::uint64_t seed) {
    SimulationRecipe r;
    r.n_obs = 300;
    r.n_vars = 1000;
    r.n_peaks = 30;
    r.sigma = 4.0;
    r.amp_min = 0.5;
    r.amp_max = 3.0;
    r.active_set = {{150, 166}, {500, 516}, {850, 866}};
    r.response_weights.assign(51, 1.0);
    r.noise_sd = 2.0;
    r.seed = seed;
    return r;
}

SimulationRecipe dsim_bar_recipe(std::uint64_t seed) {
    SimulationRecipe r;
    r.n_obs = 200;
    r.n_vars = 50;
    r.n_peaks = 100;
    r.sigma = 1.0;
    r.amp_min = 0.5;
    r.amp_max = 3.0;
    r.active_set = {{1, 5}, {39, 50}};
    r.response_weights.assign(17, 1.0);
    r.noise_sd = 0.1;
    r.seed = seed;
    return r;
}

namespace {

// Row of (V^T V)^{-1} V^T selecting the first-derivative coefficient for a
// degree-`degree` fit over offsets -left..right.
Vector derivative_weights(std::size_t left, std::size_t right, std::size_t degree) {
    const std::size_t width = left + right + 1;
    const std::size_t terms = degree + 1;
    Matrix v(width, terms);
    for (std::size_t i = 0; i < width; ++i) {
        const double s = static_cast<double>(i) - static_cast<double>(left);
        double pow = 1.0;
        for (std::size_t d = 0; d < terms; ++d) {
            v(i, d) = pow;
            pow *= s;
        }
    }
    const CholeskyFactor vtv(gram(v));
    Vector weights(width);
    for (std::size_t i = 0; i < width; ++i) {
        Vector rhs(terms);
        for (std::size_t d = 0; d < terms; ++d) rhs[d] = v(i, d);
        weights[i] = vtv.solve(rhs)[1];
    }
    return weights;
}

}  // namespace

Matrix savitzky_golay_derivative(const Matrix& X, std::size_t window, std::size_t degree) {
    const std::size_t p = X.cols();
    if (window % 2 == 0) throw std::invalid_argument("savitzky_golay: window must be odd");
    if (window <= degree) throw std::invalid_argument("savitzky_golay: window must exceed degree");
    if (p < window) {
        throw std::invalid_argument("savitzky_golay: window " + std::to_string(window) +
                                    " too large for " + std::to_string(p) + " variables");
    }
    const std::size_t half = window / 2;

    // One weight vector per distinct (left, right) truncation.
    std::vector<Vector> by_left(half), by_right(half);
    for (std::size_t l = 0; l < half; ++l) by_left[l] = derivative_weights(l, half, degree);
    for (std::size_t r = 0; r < half; ++r) by_right[r] = derivative_weights(half, r, degree);
    const Vector interior = derivative_weights(half, half, degree);

    Matrix out(X.rows(), p);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double* row = X.row(i);
        double* dst = out.row(i);
        for (std::size_t q = 0; q < p; ++q) {
            const std::size_t left = std::min(q, half);
            const std::size_t right = std::min(p - 1 - q, half);
            const Vector& w =
                (left == half && right == half) ? interior
                : (left < half)                 ? by_left[left]
                                                : by_right[right];
            dst[q] = kernels::dot(w.data(), row + (q - left), w.size());
        }
    }
    return out;
}

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<Vector> parse_csv_rows(const std::string& path, bool skip_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<Vector> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && skip_header) continue;
        if (line.empty()) continue;
        Vector row;
        const char* p = line.data();
        const char* end = p + line.size();
        std::size_t col = 1;
        while (true) {
            double value = 0.0;
            const auto res = std::from_chars(p, end, value);
            if (res.ec != std::errc()) {
                throw ParseError(path + ": cannot parse number at line " +
                                     std::to_string(line_no) + ", field " + std::to_string(col),
                                 line_no, col);
            }
            row.push_back(value);
            p = res.ptr;
            if (p == end) break;
            if (*p != ',') {
                throw ParseError(path + ": expected ',' at line " + std::to_string(line_no) +
                                     ", field " + std::to_string(col),
                                 line_no, col);
            }
            ++p;
            ++col;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(path + ": ragged row " + std::to_string(line_no) + " has " +
                                 std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(rows.front().size()),
                             line_no);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows", line_no);
    return rows;
}

}  // namespace

Matrix load_csv_matrix(const std::string& path, bool skip_header) {
    const auto rows = parse_csv_rows(path, skip_header);
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(rows[i].begin(), rows[i].end(), m.row(i));
    }
    ensure_finite(m, path.c_str());
    return m;
}

Vector load_csv_vector(const std::string& path, bool skip_header) {
    const auto rows = parse_csv_rows(path, skip_header);
    if (rows.front().size() != 1) {
        throw ParseError(path + ": expected a single column, found " +
                             std::to_string(rows.front().size()),
                         1);
    }
    Vector v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i][0];
    ensure_finite(v, path.c_str());
    return v;
}

void save_csv(const std::string& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    std::string line;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        line.clear();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) line += ',';
            line += format_double(m(i, j));
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoError("write failed: " + path);
}

void save_csv(const std::string& path, const Vector& v) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (double x : v) out << format_double(x) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

SimulationRecipe load_recipe(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
    SimulationRecipe r;
    r.n_obs = j.at("n_obs").get<std::size_t>();
    r.n_vars = j.at("n_vars").get<std::size_t>();
    r.n_peaks = j.at("n_peaks").get<std::size_t>();
    r.sigma = j.at("sigma").get<double>();
    const auto& amp = j.at("amp_range");
    r.amp_min = amp.at(0).get<double>();
    r.amp_max = amp.at(1).get<double>();
    for (const auto& range : j.at("active_set")) {
        r.active_set.push_back({range.at(0).get<std::size_t>(), range.at(1).get<std::size_t>()});
    }
    const auto& weights = j.at("response_weights");
    if (!weights.is_string()) {
        r.response_weights = weights.get<Vector>();
    } else if (weights.get<std::string>() != "random") {
        throw ParseError(path + ": response_weights must be an array or \"random\"", 0);
    }
    r.noise_sd = j.at("noise_sd").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.validate();
    return r;
}

void save_recipe(const std::string& path, const SimulationRecipe& recipe) {
    nlohmann::json j;
    j["n_obs"] = recipe.n_obs;
    j["n_vars"] = recipe.n_vars;
    j["n_peaks"] = recipe.n_peaks;
    j["sigma"] = recipe.sigma;
    j["amp_range"] = {recipe.amp_min, recipe.amp_max};
    nlohmann::json ranges = nlohmann::json::array();
    for (const auto& r : recipe.active_set) ranges.push_back({r.first, r.last});
    j["active_set"] = ranges;
    if (recipe.response_weights.empty()) {
        j["response_weights"] = "random";
    } else {
        j["response_weights"] = recipe.response_weights;
    }
    j["noise_sd"] = recipe.noise_sd;
    j["seed"] = recipe.seed;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace dspls
