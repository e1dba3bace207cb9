#include "dspls/pls.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dspls/kernels.hpp"

namespace dspls {

const char* to_string(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::pls: return "pls";
        case PenaltyKind::pseudo_lasso: return "pseudo_lasso";
        case PenaltyKind::pseudo_group_lasso: return "pseudo_group_lasso";
        case PenaltyKind::pseudo_ls: return "pseudo_ls";
        case PenaltyKind::pseudo_ridge: return "pseudo_ridge";
    }
    return "unknown";
}

PenaltyKind penalty_kind_from_string(const std::string& name) {
    if (name == "pls") return PenaltyKind::pls;
    if (name == "pseudo_lasso") return PenaltyKind::pseudo_lasso;
    if (name == "pseudo_group_lasso") return PenaltyKind::pseudo_group_lasso;
    if (name == "pseudo_ls") return PenaltyKind::pseudo_ls;
    if (name == "pseudo_ridge") return PenaltyKind::pseudo_ridge;
    throw std::invalid_argument("unknown penalty kind: " + name);
}

void PenaltySpec::validate(std::size_t n_vars) const {
    if (partition.has_value() != (kind == PenaltyKind::pseudo_group_lasso)) {
        throw std::invalid_argument("PenaltySpec: partition present iff kind is group lasso");
    }
    if (ridge.has_value() != (kind == PenaltyKind::pseudo_ridge)) {
        throw std::invalid_argument("PenaltySpec: ridge params present iff kind is ridge");
    }
    if (kind == PenaltyKind::pseudo_group_lasso) {
        partition->validate(n_vars);
        if (varsigma.size() != static_cast<std::size_t>(partition->n_groups)) {
            throw std::invalid_argument("PenaltySpec: one shrink ratio per group required");
        }
    } else if (varsigma.size() != 1) {
        throw std::invalid_argument("PenaltySpec: exactly one shrink ratio expected");
    }
}

PenaltySpec PenaltySpec::make_pls() { return PenaltySpec{}; }

PenaltySpec PenaltySpec::make_lasso(ShrinkRatio varsigma) {
    PenaltySpec s;
    s.kind = PenaltyKind::pseudo_lasso;
    s.varsigma = {varsigma};
    return s;
}

PenaltySpec PenaltySpec::make_group_lasso(GroupPartition partition,
                                          std::vector<ShrinkRatio> varsigma) {
    PenaltySpec s;
    s.kind = PenaltyKind::pseudo_group_lasso;
    s.partition = std::move(partition);
    s.varsigma = std::move(varsigma);
    return s;
}

PenaltySpec PenaltySpec::make_ls(ShrinkRatio varsigma) {
    PenaltySpec s;
    s.kind = PenaltyKind::pseudo_ls;
    s.varsigma = {varsigma};
    return s;
}

PenaltySpec PenaltySpec::make_ridge(ShrinkRatio varsigma, RidgeParams params) {
    PenaltySpec s;
    s.kind = PenaltyKind::pseudo_ridge;
    s.varsigma = {varsigma};
    s.ridge = params;
    return s;
}

FittedModel fit(const Matrix& X, const Vector& y, const PenaltySpec& spec,
                std::size_t n_components) {
    const std::size_t n = X.rows(), p = X.cols();
    if (n != y.size()) throw std::invalid_argument("fit: rows(X) != length(y)");
    if (n < 3) throw std::invalid_argument("fit: need at least 3 observations");
    if (n_components < 1) throw std::invalid_argument("fit: need at least one component");
    ensure_finite(X, "fit: X");
    ensure_finite(y, "fit: y");
    spec.validate(p);

    FittedModel model;
    model.spec = spec;
    model.n_requested = n_components;
    model.n_vars = p;
    const std::size_t m_max = std::min({n_components, n - 1, p});

    auto [xc, col_means] = mean_center(X);
    auto [yc, y_mean] = mean_center(y);
    model.centering = {std::move(col_means), y_mean};
    const double x_scale = frobenius_norm(xc);

    // The LS and ridge solvers use the Gram of the *undeflated* centered X;
    // factor it once and reuse it for every component.
    std::optional<CholeskyFactor> factor;
    if (spec.kind == PenaltyKind::pseudo_ls) {
        factor.emplace(gram(xc));
    } else if (spec.kind == PenaltyKind::pseudo_ridge) {
        Matrix a = gram(xc);
        kernels::scale(spec.ridge->nu2, a.data(), a.size());
        for (std::size_t i = 0; i < p; ++i) a(i, i) += 1.0;
        factor.emplace(std::move(a));
    }

    Matrix x_m = xc;
    std::vector<Vector> weights, scores, loadings;
    double z_scale = 0.0;
    double max_score_sq = 0.0;
    for (std::size_t m = 0; m < m_max; ++m) {
        Vector z = matvec_transposed(x_m, yc);
        const double z_norm = norm_l2(z);
        if (m == 0) {
            z_scale = z_norm;
            if (!(z_norm > 0.0)) {
                throw RankExhausted("fit: response is uncorrelated with every variable");
            }
        } else if (z_norm <= 1e-12 * z_scale) {
            model.rank_exhausted = true;
            break;
        }

        Vector w;
        std::vector<ThresholdLog> logs;
        switch (spec.kind) {
            case PenaltyKind::pls: {
                w = z;
                kernels::scale(1.0 / z_norm, w.data(), w.size());
                logs.push_back({0.0, z_norm, 0.0});
                break;
            }
            case PenaltyKind::pseudo_lasso: {
                auto res = lasso_weight(z, spec.varsigma[0]);
                w = std::move(res.w);
                logs.push_back(res.log);
                break;
            }
            case PenaltyKind::pseudo_group_lasso: {
                auto res = group_lasso_weight(z, *spec.partition, spec.varsigma,
                                              CalibrationContext{x_m, yc});
                w = std::move(res.w);
                logs = std::move(res.logs);
                break;
            }
            case PenaltyKind::pseudo_ls: {
                auto res = ls_weight(*factor, z, spec.varsigma[0]);
                w = std::move(res.w);
                logs.push_back(res.log);
                break;
            }
            case PenaltyKind::pseudo_ridge: {
                auto res = ridge_weight(xc, *factor, z, spec.varsigma[0], *spec.ridge);
                w = std::move(res.w);
                logs.push_back(res.log);
                break;
            }
        }

        Vector t = matvec(x_m, w);
        const double t_sq = kernels::sum_sq(t.data(), t.size());
        // A score this small would also sink below the pivot tolerance of the
        // score-Gram solve; truncate while the Gram is still solvable.
        if (std::sqrt(t_sq) <= 1e-12 * x_scale || t_sq <= 1e-10 * max_score_sq) {
            if (m == 0) throw RankExhausted("fit: first score vector vanished");
            model.rank_exhausted = true;
            break;
        }
        max_score_sq = std::max(max_score_sq, t_sq);
        // Deflate via the loading p = X_m^T t / (t^T t); the loadings are kept
        // to map penalty weights onto the undeflated X below.
        Vector loading = matvec_transposed(x_m, t);
        kernels::scale(1.0 / t_sq, loading.data(), p);
        for (std::size_t i = 0; i < n; ++i) {
            if (t[i] != 0.0) kernels::axpy(-t[i], loading.data(), x_m.row(i), p);
        }
        weights.push_back(std::move(w));
        scores.push_back(std::move(t));
        loadings.push_back(std::move(loading));
        model.threshold_log.push_back(std::move(logs));
    }

    const std::size_t m_actual = weights.size();
    model.n_components = m_actual;
    model.weights = Matrix(m_actual, p);
    model.scores = Matrix(m_actual, n);
    for (std::size_t m = 0; m < m_actual; ++m) {
        std::copy(weights[m].begin(), weights[m].end(), model.weights.row(m));
        std::copy(scores[m].begin(), scores[m].end(), model.scores.row(m));
    }

    // Penalty weights act on the deflated matrices; map them onto the
    // undeflated X through the loadings so that X w*_m = t_m holds exactly:
    // w*_m = w_m - sum_{j<m} (p_j^T w_m) w*_j.
    std::vector<Vector> effective(m_actual);
    for (std::size_t m = 0; m < m_actual; ++m) {
        Vector wm = weights[m];
        for (std::size_t j = 0; j < m; ++j) {
            const double c = kernels::dot(loadings[j].data(), weights[m].data(), p);
            if (c != 0.0) kernels::axpy(-c, effective[j].data(), wm.data(), p);
        }
        effective[m] = std::move(wm);
    }

    // beta at order k solves the k x k score Gram system; scores are
    // orthogonal by deflation so this is a guarded near-diagonal solve.
    Matrix t_gram(m_actual, m_actual);
    Vector t_y(m_actual);
    for (std::size_t i = 0; i < m_actual; ++i) {
        t_y[i] = kernels::dot(model.scores.row(i), yc.data(), n);
        for (std::size_t j = 0; j <= i; ++j) {
            t_gram(i, j) = t_gram(j, i) = kernels::dot(model.scores.row(i), model.scores.row(j), n);
        }
    }
    model.coefficients.resize(m_actual);
    for (std::size_t k = 1; k <= m_actual; ++k) {
        Matrix gk(k, k);
        Vector bk(k);
        for (std::size_t i = 0; i < k; ++i) {
            bk[i] = t_y[i];
            for (std::size_t j = 0; j < k; ++j) gk(i, j) = t_gram(i, j);
        }
        const Vector a = solve_spd(gk, bk);
        Vector beta(p, 0.0);
        for (std::size_t m = 0; m < k; ++m) kernels::axpy(a[m], effective[m].data(), beta.data(), p);
        model.coefficients[k - 1] = std::move(beta);
    }

    const Vector& beta_final = model.coefficients.back();
    model.fitted_values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.fitted_values[i] = y_mean + kernels::dot(xc.row(i), beta_final.data(), p);
    }
    return model;
}

Vector predict(const FittedModel& model, const Matrix& X_new, std::size_t order) {
    if (order < 1 || order > model.n_components) {
        throw std::invalid_argument("predict: order out of range");
    }
    if (X_new.cols() != model.n_vars) {
        throw std::invalid_argument("predict: X has " + std::to_string(X_new.cols()) +
                                    " columns, model expects " + std::to_string(model.n_vars));
    }
    const Vector& beta = model.coefficients[order - 1];
    const double offset =
        model.centering.y_mean -
        kernels::dot(model.centering.col_means.data(), beta.data(), beta.size());
    Vector yhat(X_new.rows());
    for (std::size_t i = 0; i < X_new.rows(); ++i) {
        yhat[i] = offset + kernels::dot(X_new.row(i), beta.data(), beta.size());
    }
    return yhat;
}

const Vector& coefficients(const FittedModel& model, std::size_t order) {
    if (order < 1 || order > model.n_components) {
        throw std::invalid_argument("coefficients: order out of range");
    }
    return model.coefficients[order - 1];
}

namespace {

nlohmann::json log_to_json(const std::vector<ThresholdLog>& logs) {
    if (logs.size() == 1) {
        return {{"nu", logs[0].nu}, {"mu", logs[0].mu}, {"lambda", logs[0].lambda}};
    }
    nlohmann::json nu = nlohmann::json::array(), mu = nlohmann::json::array(),
                   lambda = nlohmann::json::array();
    for (const auto& l : logs) {
        nu.push_back(l.nu);
        mu.push_back(l.mu);
        lambda.push_back(l.lambda);
    }
    return {{"nu", nu}, {"mu", mu}, {"lambda", lambda}};
}

std::vector<ThresholdLog> log_from_json(const nlohmann::json& j) {
    std::vector<ThresholdLog> logs;
    if (j.at("nu").is_array()) {
        const auto& nu = j.at("nu");
        const auto& mu = j.at("mu");
        const auto& lambda = j.at("lambda");
        for (std::size_t g = 0; g < nu.size(); ++g) {
            logs.push_back({nu[g].get<double>(), mu[g].get<double>(), lambda[g].get<double>()});
        }
    } else {
        logs.push_back({j.at("nu").get<double>(), j.at("mu").get<double>(),
                        j.at("lambda").get<double>()});
    }
    return logs;
}

}  // namespace

std::string to_json_string(const FittedModel& model) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = to_string(model.spec.kind);
    j["M"] = model.n_components;
    j["P"] = model.n_vars;
    j["col_means"] = model.centering.col_means;
    j["y_mean"] = model.centering.y_mean;
    if (model.spec.varsigma.size() == 1) {
        j["varsigma"] = model.spec.varsigma[0].value();
    } else {
        nlohmann::json v = nlohmann::json::array();
        for (const auto& s : model.spec.varsigma) v.push_back(s.value());
        j["varsigma"] = v;
    }
    if (model.spec.ridge) j["nu2"] = model.spec.ridge->nu2;
    if (model.spec.partition) {
        nlohmann::json groups = nlohmann::json::array();
        for (int g : model.spec.partition->group_of) groups.push_back(g + 1);
        j["groups"] = groups;
    }
    nlohmann::json w = nlohmann::json::array(), beta = nlohmann::json::array(),
                   thresholds = nlohmann::json::array();
    for (std::size_t m = 0; m < model.n_components; ++m) {
        w.push_back(Vector(model.weights.row(m), model.weights.row(m) + model.n_vars));
        beta.push_back(model.coefficients[m]);
        thresholds.push_back(log_to_json(model.threshold_log[m]));
    }
    j["W"] = w;
    j["beta"] = beta;
    j["thresholds"] = thresholds;
    return j.dump(2) + "\n";
}

FittedModel model_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model JSON: ") + e.what(), 0);
    }
    FittedModel model;
    if (j.at("format_version").get<int>() != 1) {
        throw ParseError("model JSON: unsupported format_version", 0);
    }
    model.spec.kind = penalty_kind_from_string(j.at("kind").get<std::string>());
    model.n_components = j.at("M").get<std::size_t>();
    model.n_requested = model.n_components;
    model.n_vars = j.at("P").get<std::size_t>();
    model.centering.col_means = j.at("col_means").get<Vector>();
    model.centering.y_mean = j.at("y_mean").get<double>();
    model.spec.varsigma.clear();
    if (j.at("varsigma").is_array()) {
        for (const auto& v : j.at("varsigma")) model.spec.varsigma.emplace_back(v.get<double>());
    } else {
        model.spec.varsigma.emplace_back(j.at("varsigma").get<double>());
    }
    if (j.contains("nu2")) model.spec.ridge = RidgeParams{j.at("nu2").get<double>()};
    if (j.contains("groups")) {
        GroupPartition part;
        int max_id = 0;
        for (const auto& g : j.at("groups")) {
            const int id = g.get<int>() - 1;
            part.group_of.push_back(id);
            max_id = std::max(max_id, id);
        }
        part.n_groups = max_id + 1;
        model.spec.partition = std::move(part);
    }
    const auto& w = j.at("W");
    const auto& beta = j.at("beta");
    const auto& thresholds = j.at("thresholds");
    model.weights = Matrix(model.n_components, model.n_vars);
    for (std::size_t m = 0; m < model.n_components; ++m) {
        const Vector wm = w.at(m).get<Vector>();
        const Vector bm = beta.at(m).get<Vector>();
        if (wm.size() != model.n_vars || bm.size() != model.n_vars) {
            throw ParseError("model JSON: component length mismatch", 0);
        }
        std::copy(wm.begin(), wm.end(), model.weights.row(m));
        model.coefficients.push_back(bm);
        model.threshold_log.push_back(log_from_json(thresholds.at(m)));
    }
    return model;
}

void save_model(const FittedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << to_json_string(model);
    if (!out) throw IoError("write failed: " + path);
}

FittedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json_string(buf.str());
}

}  // namespace dspls
