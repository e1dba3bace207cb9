#include "dspls/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dspls/baselines.hpp"
#include "dspls/datasets.hpp"
#include "dspls/kernels.hpp"
#include "dspls/metrics.hpp"
#include "dspls/model_selection.hpp"
#include "dspls/pls.hpp"
#include "dspls/reports.hpp"
#include "dspls/sampling.hpp"

namespace fs = std::filesystem;

namespace dspls::cli {

namespace {

// Flat or one-level-nested JSON config mapped onto CLI11 options; sections
// named after subcommands, e.g. {"benchmark": {"seed": 7}}.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("config file: ") + e.what(), 0);
        }
        std::vector<CLI::ConfigItem> items;
        collect(j, {}, items);
        return items;
    }

  private:
    static std::string scalar_to_string(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void collect(const nlohmann::json& j, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto nested = parents;
                nested.push_back(key);
                collect(value, std::move(nested), items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& v : value) item.inputs.push_back(scalar_to_string(v));
            } else {
                item.inputs.push_back(scalar_to_string(value));
            }
            items.push_back(std::move(item));
        }
    }
};

const std::vector<std::string> kPlsMethods = {"pls", "dual-lasso", "dual-gl", "dual-ls",
                                              "dual-ridge"};
const std::vector<std::string> kBaselineMethods = {"ols", "ridge", "lasso"};

bool is_pls_method(const std::string& m) {
    return std::find(kPlsMethods.begin(), kPlsMethods.end(), m) != kPlsMethods.end();
}

bool is_known_method(const std::string& m) {
    return is_pls_method(m) || std::find(kBaselineMethods.begin(), kBaselineMethods.end(), m) !=
                                   kBaselineMethods.end();
}

struct CommonOptions {
    std::string x_path, y_path;
    bool header = false;
    std::string out_dir;
};

struct MethodOptions {
    double shrink = 0.99;
    int groups = 2;
    std::optional<double> nu2;
    std::optional<double> ridge_t;
    std::optional<double> lasso_t;
};

PenaltySpec build_spec(const std::string& method, const MethodOptions& opt, std::size_t n_vars,
                       double nu2_resolved) {
    if (method == "pls") return PenaltySpec::make_pls();
    if (method == "dual-lasso") return PenaltySpec::make_lasso(ShrinkRatio(opt.shrink));
    if (method == "dual-ls") return PenaltySpec::make_ls(ShrinkRatio(opt.shrink));
    if (method == "dual-ridge") {
        return PenaltySpec::make_ridge(ShrinkRatio(opt.shrink), RidgeParams{nu2_resolved});
    }
    if (method == "dual-gl") {
        auto part = GroupPartition::contiguous_blocks(n_vars, opt.groups);
        std::vector<ShrinkRatio> vs(static_cast<std::size_t>(opt.groups),
                                    ShrinkRatio(opt.shrink));
        return PenaltySpec::make_group_lasso(std::move(part), std::move(vs));
    }
    throw std::invalid_argument("unknown PLS-family method: " + method);
}

struct BaselineModel {
    std::string kind;
    Vector beta;
    CenteringStats centering;
    double t = 0.0;

    Vector predict(const Matrix& x) const {
        const double offset =
            centering.y_mean -
            kernels::dot(centering.col_means.data(), beta.data(), beta.size());
        Vector yhat(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) {
            yhat[i] = offset + kernels::dot(x.row(i), beta.data(), beta.size());
        }
        return yhat;
    }
};

BaselineModel fit_baseline(const std::string& method, const Matrix& x, const Vector& y, double t,
                           const LassoOptions& lasso_options = {}) {
    auto [xc, col_means] = mean_center(x);
    auto [yc, y_mean] = mean_center(y);
    BaselineModel model;
    model.kind = method;
    model.centering = {std::move(col_means), y_mean};
    model.t = t;
    if (method == "ols") {
        model.beta = ols_fit(xc, yc);
    } else if (method == "ridge") {
        model.beta = ridge_fit(xc, yc, t);
    } else if (method == "lasso") {
        model.beta = lasso_fit(xc, yc, t, lasso_options);
    } else {
        throw std::invalid_argument("unknown baseline method: " + method);
    }
    return model;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

void write_coefficients_csv(const std::string& path,
                            const std::vector<std::pair<std::size_t, const Vector*>>& orders) {
    std::string text = "order,variable,beta\n";
    for (const auto& [order, beta] : orders) {
        for (std::size_t p = 0; p < beta->size(); ++p) {
            text += std::to_string(order);
            text += ',';
            text += std::to_string(p + 1);
            text += ',';
            text += format_double((*beta)[p]);
            text += '\n';
        }
    }
    write_text(path, text);
}

std::pair<Matrix, Vector> load_xy(const CommonOptions& common) {
    Matrix x = load_csv_matrix(common.x_path, common.header);
    Vector y = load_csv_vector(common.y_path, common.header);
    if (x.rows() != y.size()) {
        throw std::invalid_argument("X has " + std::to_string(x.rows()) + " rows but y has " +
                                    std::to_string(y.size()) + " values");
    }
    return {std::move(x), std::move(y)};
}

double default_lasso_t(const Matrix& x, const Vector& y) {
    auto [xc, cm] = mean_center(x);
    auto [yc, ym] = mean_center(y);
    const Vector z = matvec_transposed(xc, yc);
    double t_max = 0.0;
    for (double v : z) t_max = std::max(t_max, std::fabs(v));
    return 0.1 * t_max;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::string preset;
    std::string recipe_path;
    std::uint64_t seed = 7;
    bool seed_given = false;
    std::string out_dir;
};

int run_simulate(const SimulateArgs& args) {
    SimulationRecipe recipe;
    if (!args.recipe_path.empty()) {
        recipe = load_recipe(args.recipe_path);
        if (args.seed_given) recipe.seed = args.seed;
    } else if (args.preset == "dsim") {
        recipe = dsim_recipe(args.seed);
    } else if (args.preset == "dsim-bar") {
        recipe = dsim_bar_recipe(args.seed);
    } else {
        throw CLI::ValidationError("simulate", "one of --preset or --recipe is required");
    }
    const SimulatedDataset data = simulate(recipe);
    fs::create_directories(args.out_dir);
    save_csv((fs::path(args.out_dir) / "X.csv").string(), data.X);
    save_csv((fs::path(args.out_dir) / "y.csv").string(), data.y);
    save_csv((fs::path(args.out_dir) / "truth.csv").string(), data.true_beta);
    save_recipe((fs::path(args.out_dir) / "recipe.json").string(), data.recipe);
    std::cout << "wrote " << data.X.rows() << "x" << data.X.cols() << " dataset to "
              << args.out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// split

struct SplitArgs {
    CommonOptions common;
    std::string method = "calvalxy";
    std::size_t n_cal = 0;
    double fraction = 0.8;
    std::size_t n_groups = 10;
    std::string out_path;
};

int run_split(const SplitArgs& args) {
    if (args.method == "calvalxy" && args.common.y_path.empty()) {
        throw CLI::RequiredError("--y (calvalxy splits on the response)");
    }
    Matrix x = load_csv_matrix(args.common.x_path, args.common.header);
    std::size_t n_cal = args.n_cal;
    if (n_cal == 0) {
        n_cal = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(args.fraction * static_cast<double>(x.rows()))),
            1, x.rows() - 1);
    }
    SplitPlan plan;
    if (args.method == "kennard-stone") {
        plan = kennard_stone(x, n_cal);
    } else {
        Vector y = load_csv_vector(args.common.y_path, args.common.header);
        plan = calvalxy(x, y, n_cal, args.n_groups);
    }
    save_split_csv(args.out_path, plan);
    std::cout << "calibration " << plan.calibration_idx.size() << ", validation "
              << plan.validation_idx.size() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit / predict

struct FitArgs {
    CommonOptions common;
    std::string method = "pls";
    std::size_t ncomp = 6;
    MethodOptions opt;
};

nlohmann::json baseline_to_json(const BaselineModel& model) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = model.kind;
    j["P"] = model.beta.size();
    j["col_means"] = model.centering.col_means;
    j["y_mean"] = model.centering.y_mean;
    j["beta"] = model.beta;
    if (model.kind != "ols") j["t"] = model.t;
    return j;
}

BaselineModel baseline_from_json(const nlohmann::json& j) {
    BaselineModel model;
    model.kind = j.at("kind").get<std::string>();
    model.beta = j.at("beta").get<Vector>();
    model.centering.col_means = j.at("col_means").get<Vector>();
    model.centering.y_mean = j.at("y_mean").get<double>();
    if (j.contains("t")) model.t = j.at("t").get<double>();
    return model;
}

int run_fit(const FitArgs& args) {
    auto [x, y] = load_xy(args.common);
    fs::create_directories(args.common.out_dir);
    const fs::path dir(args.common.out_dir);

    if (is_pls_method(args.method)) {
        const double nu2 = args.opt.nu2.value_or(args.opt.ridge_t ? 1.0 / *args.opt.ridge_t : 1.0);
        const PenaltySpec spec = build_spec(args.method, args.opt, x.cols(), nu2);
        const FittedModel model = fit(x, y, spec, args.ncomp);
        save_model(model, (dir / "model.json").string());
        std::vector<std::pair<std::size_t, const Vector*>> orders;
        for (std::size_t k = 1; k <= model.n_components; ++k) {
            orders.emplace_back(k, &model.coefficients[k - 1]);
        }
        write_coefficients_csv((dir / "coefficients.csv").string(), orders);
        std::cout << "fitted " << args.method << " with " << model.n_components
                  << " components\n";
    } else {
        double t = 0.0;
        if (args.method == "ridge") t = args.opt.ridge_t.value_or(1.0);
        if (args.method == "lasso") t = args.opt.lasso_t.value_or(default_lasso_t(x, y));
        const BaselineModel model = fit_baseline(args.method, x, y, t);
        write_text((dir / "model.json").string(), baseline_to_json(model).dump(2) + "\n");
        write_coefficients_csv((dir / "coefficients.csv").string(), {{0, &model.beta}});
        std::cout << "fitted " << args.method << "\n";
    }
    return 0;
}

struct PredictArgs {
    std::string model_path;
    std::string x_path;
    bool header = false;
    std::size_t order = 0;  // 0 = highest available
    std::string out_path;
};

int run_predict(const PredictArgs& args) {
    const Matrix x = load_csv_matrix(args.x_path, args.header);
    std::ifstream in(args.model_path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + args.model_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(args.model_path + ": " + e.what(), 0);
    }
    Vector yhat;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ols" || kind == "ridge" || kind == "lasso") {
        yhat = baseline_from_json(j).predict(x);
    } else {
        const FittedModel model = model_from_json_string(j.dump());
        const std::size_t order = args.order == 0 ? model.n_components : args.order;
        yhat = predict(model, x, order);
    }
    save_csv(args.out_path, yhat);
    std::cout << "wrote " << yhat.size() << " predictions\n";
    return 0;
}

// ---------------------------------------------------------------------------
// cv

struct CvArgs {
    CommonOptions common;
    std::string method = "pls";
    std::size_t max_ncomp = 10;
    std::size_t splits = 10;
    std::uint64_t seed = 0;
    double fraction = 0.8;
    std::string splitter = "random";
    MethodOptions opt;
    std::string out_path = "mse_table.csv";
};

int run_cv(const CvArgs& args) {
    auto [x, y] = load_xy(args.common);
    const double nu2 = args.opt.nu2.value_or(args.opt.ridge_t ? 1.0 / *args.opt.ridge_t : 1.0);
    const PenaltySpec spec = build_spec(args.method, args.opt, x.cols(), nu2);
    CvPlan plan;
    plan.n_splits = args.splits;
    plan.calibration_fraction = args.fraction;
    plan.seed = args.seed;
    plan.splitter = args.splitter == "calvalxy"        ? SplitMethod::calvalxy
                    : args.splitter == "kennard-stone" ? SplitMethod::kennard_stone
                                                       : SplitMethod::random;
    const ComponentSelection sel = select_components(x, y, spec, args.max_ncomp, plan);

    std::string text = "order,mean_mse,std_mse\n";
    for (std::size_t k = 0; k < sel.table.mean_mse.size(); ++k) {
        text += std::to_string(k + 1);
        text += ',';
        text += format_double(sel.table.mean_mse[k]);
        text += ',';
        text += format_double(sel.table.std_mse[k]);
        text += '\n';
    }
    write_text(args.out_path, text);
    std::cout << sel.best_order << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkArgs {
    std::string scenario;
    CommonOptions common;
    bool sg = false;
    std::vector<std::string> methods = {"pls", "dual-lasso"};
    std::uint64_t seed = 7;
    std::size_t max_ncomp = 10;
    std::size_t chosen_order = 6;
    double fraction = 0.8;
    std::size_t n_groups = 10;
    MethodOptions opt;
};

int run_benchmark(const BenchmarkArgs& args) {
    Matrix x;
    Vector y;
    std::vector<IndexRange> truth_ranges;
    if (args.scenario == "file" && (args.common.x_path.empty() || args.common.y_path.empty())) {
        throw CLI::RequiredError("--x and --y (scenario file)");
    }
    for (const std::string& method : args.methods) {
        if (!is_known_method(method)) {
            throw CLI::ValidationError("--methods", "unknown method: " + method);
        }
    }
    if (args.scenario == "dsim" || args.scenario == "dsim-bar") {
        const SimulationRecipe recipe =
            args.scenario == "dsim" ? dsim_recipe(args.seed) : dsim_bar_recipe(args.seed);
        SimulatedDataset data = simulate(recipe);
        x = std::move(data.X);
        y = std::move(data.y);
        truth_ranges = recipe.active_set;
    } else {
        std::tie(x, y) = load_xy(args.common);
    }
    if (args.sg) x = savitzky_golay_derivative(x);

    const std::size_t n_cal = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(args.fraction * static_cast<double>(x.rows()))), 1,
        x.rows() - 1);
    const SplitPlan split = calvalxy(x, y, n_cal, args.n_groups);
    const Matrix x_cal = take_rows(x, split.calibration_idx);
    const Vector y_cal = take(y, split.calibration_idx);
    const Matrix x_val = take_rows(x, split.validation_idx);
    const Vector y_val = take(y, split.validation_idx);
    const std::size_t m_max = std::min({args.max_ncomp, x_cal.rows() - 1, x_cal.cols()});

    // Hyperparameters shared between a baseline and its dual mirror.
    std::optional<double> ridge_t = args.opt.ridge_t;
    const bool needs_ridge_t =
        std::find(args.methods.begin(), args.methods.end(), "ridge") != args.methods.end() ||
        (!args.opt.nu2 && std::find(args.methods.begin(), args.methods.end(), "dual-ridge") !=
                              args.methods.end());
    if (!ridge_t && needs_ridge_t) {
        CvPlan plan;
        plan.n_splits = 5;
        plan.calibration_fraction = 0.8;
        plan.seed = args.seed;
        ridge_t = select_hyperparameter(x_cal, y_cal, BaselineMethod::ridge,
                                        {0.01, 0.1, 1.0, 10.0, 100.0}, plan);
    }
    const double nu2 = args.opt.nu2.value_or(ridge_t ? 1.0 / *ridge_t : 1.0);

    nlohmann::json summary;
    summary["scenario"] = args.scenario;
    summary["seed"] = args.seed;
    summary["split"] = {{"method", "calvalxy"},
                        {"n_cal", split.calibration_idx.size()},
                        {"n_val", split.validation_idx.size()},
                        {"n_groups", args.n_groups}};
    summary["max_ncomp"] = m_max;
    summary["chosen_order"] = args.chosen_order;
    if (ridge_t) summary["ridge_t"] = *ridge_t;

    std::string rmse_csv = "method,order,set,rmse,mae,r2\n";
    std::string coef_csv = "method,variable,beta\n";
    std::string sparsity_csv = "method,l0,l0_complement\n";

    auto add_metric_row = [&rmse_csv](const MetricRow& row) {
        rmse_csv += row.method + ',' + std::to_string(row.order) + ',' + row.set + ',' +
                    format_double(row.rmse) + ',' + format_double(row.mae) + ',' +
                    format_double(row.r2) + '\n';
    };

    for (const std::string& method : args.methods) {
        nlohmann::json entry;
        const auto started = std::chrono::steady_clock::now();
        try {
            Vector beta;
            double beta_tol = 0.0;
            std::size_t order_used = 0;
            if (is_pls_method(method)) {
                const PenaltySpec spec = build_spec(method, args.opt, x.cols(), nu2);
                const FittedModel model = fit(x_cal, y_cal, spec, m_max);
                for (const MetricRow& row :
                     metric_table({{method, model}}, x_cal, y_cal, x_val, y_val, m_max)) {
                    add_metric_row(row);
                }
                order_used = std::min(args.chosen_order, model.n_components);
                beta = coefficients(model, order_used);
                if (method == "pls") {
                    double max_abs = 0.0;
                    for (double b : beta) max_abs = std::max(max_abs, std::fabs(b));
                    beta_tol = 1e-8 * max_abs;
                }
                entry["n_components"] = model.n_components;
                entry["rank_exhausted"] = model.rank_exhausted;
                entry["val_rmse_at_chosen"] = rmse(y_val, predict(model, x_val, order_used));
                if (method == "dual-ridge") entry["nu2"] = nu2;
            } else {
                double t = 0.0;
                if (method == "ridge") t = *ridge_t;
                if (method == "lasso") {
                    t = args.opt.lasso_t.value_or(default_lasso_t(x_cal, y_cal));
                }
                const BaselineModel model = fit_baseline(method, x_cal, y_cal, t);
                const Vector yhat_cal = model.predict(x_cal);
                const Vector yhat_val = model.predict(x_val);
                add_metric_row({method, 0, "cal", rmse(y_cal, yhat_cal), mae(y_cal, yhat_cal),
                                r_squared(y_cal, yhat_cal)});
                add_metric_row({method, 0, "val", rmse(y_val, yhat_val), mae(y_val, yhat_val),
                                r_squared(y_val, yhat_val)});
                beta = model.beta;
                double max_abs = 0.0;
                for (double b : beta) max_abs = std::max(max_abs, std::fabs(b));
                beta_tol = method == "lasso" ? 0.0 : 1e-8 * max_abs;
                entry["val_rmse_at_chosen"] = rmse(y_val, yhat_val);
                if (method != "ols") entry["t"] = t;
            }
            for (std::size_t p = 0; p < beta.size(); ++p) {
                coef_csv += method + ',' + std::to_string(p + 1) + ',' +
                            format_double(beta[p]) + '\n';
            }
            const std::size_t nnz = l0(beta, beta_tol);
            sparsity_csv += method + ',' + std::to_string(nnz) + ',' +
                            std::to_string(beta.size() - nnz) + '\n';
            entry["status"] = "ok";
            entry["order_used"] = order_used;
            entry["l0"] = nnz;
            if (!truth_ranges.empty()) {
                const RecoveryScore score = recovery_score(beta, truth_ranges, beta_tol);
                entry["recovery"] = {{"precision", score.precision},
                                     {"recall", score.recall},
                                     {"degenerate", score.degenerate}};
            }
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["error"] = e.what();
        }
        entry["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                         started)
                               .count();
        summary["methods"][method] = entry;
    }

    fs::create_directories(args.common.out_dir);
    const fs::path dir(args.common.out_dir);
    write_text((dir / "rmse_vs_components.csv").string(), rmse_csv);
    write_text((dir / "coefficients_stack.csv").string(), coef_csv);
    write_text((dir / "sparsity.csv").string(), sparsity_csv);
    write_text((dir / "summary.json").string(), summary.dump(2) + "\n");
    std::cout << "benchmark written to " << args.common.out_dir << "\n";
    return 0;
}

}  // namespace

int run(std::vector<std::string> args) {
    CLI::App app{"Dual sparse partial least squares regression toolkit", "dspls"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config")->description("JSON file supplying any flag; flags override it");
    app.config_formatter(std::make_shared<JsonConfig>());

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate Gaussian-mixture spectra");
    sim_cmd->add_option("--preset", sim.preset, "Built-in dataset")
        ->check(CLI::IsMember({"dsim", "dsim-bar"}));
    sim_cmd->add_option("--recipe", sim.recipe_path, "Recipe JSON file");
    auto* sim_seed = sim_cmd->add_option("--seed", sim.seed, "RNG seed");
    sim_cmd->add_option("--out-dir", sim.out_dir, "Output directory")->required();

    SplitArgs split;
    auto* split_cmd = app.add_subcommand("split", "Write a calibration/validation split");
    split_cmd->add_option("--x", split.common.x_path, "X CSV")->required();
    split_cmd->add_option("--y", split.common.y_path, "y CSV (calvalxy only)");
    split_cmd->add_flag("--header", split.common.header, "Skip a header row in inputs");
    split_cmd->add_option("--method", split.method, "Splitter")
        ->check(CLI::IsMember({"kennard-stone", "calvalxy"}));
    split_cmd->add_option("--n-cal", split.n_cal, "Calibration size (overrides --frac)");
    split_cmd->add_option("--frac", split.fraction, "Calibration fraction");
    split_cmd->add_option("--n-groups", split.n_groups, "y-quantile subsets for calvalxy");
    split_cmd->add_option("--out", split.out_path, "Output CSV")->required();

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a regression model");
    fit_cmd->add_option("--x", fit_args.common.x_path, "X CSV")->required();
    fit_cmd->add_option("--y", fit_args.common.y_path, "y CSV")->required();
    fit_cmd->add_flag("--header", fit_args.common.header, "Skip a header row in inputs");
    fit_cmd->add_option("--method", fit_args.method, "Model")
        ->check(CLI::IsMember({"pls", "dual-lasso", "dual-gl", "dual-ls", "dual-ridge", "ols",
                               "ridge", "lasso"}))
        ->required();
    fit_cmd->add_option("--ncomp", fit_args.ncomp, "Latent components");
    fit_cmd->add_option("--shrink", fit_args.opt.shrink, "Shrinking ratio in [0,1)");
    fit_cmd->add_option("--groups", fit_args.opt.groups, "Contiguous groups for dual-gl");
    fit_cmd->add_option("--nu2", fit_args.opt.nu2, "Ridge perturbation weight for dual-ridge");
    fit_cmd->add_option("--ridge-t", fit_args.opt.ridge_t, "Ridge penalty t");
    fit_cmd->add_option("--lasso-t", fit_args.opt.lasso_t, "Lasso penalty t");
    fit_cmd->add_option("--out-dir", fit_args.common.out_dir, "Output directory")->required();

    PredictArgs pred;
    auto* pred_cmd = app.add_subcommand("predict", "Predict from a saved model");
    pred_cmd->add_option("--model", pred.model_path, "model.json")->required();
    pred_cmd->add_option("--x", pred.x_path, "X CSV")->required();
    pred_cmd->add_flag("--header", pred.header, "Skip a header row in inputs");
    pred_cmd->add_option("--order", pred.order, "Latent order (default: all components)");
    pred_cmd->add_option("--out", pred.out_path, "Output CSV")->required();

    CvArgs cv;
    auto* cv_cmd = app.add_subcommand("cv", "Cross-validate the number of components");
    cv_cmd->add_option("--x", cv.common.x_path, "X CSV")->required();
    cv_cmd->add_option("--y", cv.common.y_path, "y CSV")->required();
    cv_cmd->add_flag("--header", cv.common.header, "Skip a header row in inputs");
    cv_cmd->add_option("--method", cv.method, "Model")
        ->check(CLI::IsMember(kPlsMethods));
    cv_cmd->add_option("--max-ncomp", cv.max_ncomp, "Largest order to evaluate");
    cv_cmd->add_option("--splits", cv.splits, "Number of splits");
    cv_cmd->add_option("--seed", cv.seed, "RNG seed for random splits");
    cv_cmd->add_option("--frac", cv.fraction, "Calibration fraction");
    cv_cmd->add_option("--splitter", cv.splitter, "Splitter")
        ->check(CLI::IsMember({"random", "calvalxy", "kennard-stone"}));
    cv_cmd->add_option("--shrink", cv.opt.shrink, "Shrinking ratio in [0,1)");
    cv_cmd->add_option("--groups", cv.opt.groups, "Contiguous groups for dual-gl");
    cv_cmd->add_option("--nu2", cv.opt.nu2, "Ridge perturbation weight for dual-ridge");
    cv_cmd->add_option("--out", cv.out_path, "Output mse_table.csv");

    BenchmarkArgs bench;
    auto* bench_cmd = app.add_subcommand("benchmark", "Run the comparison protocol");
    bench_cmd->add_option("--scenario", bench.scenario, "Data source")
        ->check(CLI::IsMember({"dsim", "dsim-bar", "file"}))
        ->required();
    bench_cmd->add_option("--x", bench.common.x_path, "X CSV (scenario file)");
    bench_cmd->add_option("--y", bench.common.y_path, "y CSV (scenario file)");
    bench_cmd->add_flag("--header", bench.common.header, "Skip a header row in inputs");
    bench_cmd->add_flag("--sg", bench.sg, "Apply Savitzky-Golay derivative before splitting");
    bench_cmd->add_option("--methods", bench.methods, "Comma-separated method list")
        ->delimiter(',');
    bench_cmd->add_option("--seed", bench.seed, "RNG seed");
    bench_cmd->add_option("--max-ncomp", bench.max_ncomp, "Largest order to evaluate");
    bench_cmd->add_option("--chosen-order", bench.chosen_order, "Order for coefficient stacks");
    bench_cmd->add_option("--frac", bench.fraction, "Calibration fraction");
    bench_cmd->add_option("--n-groups", bench.n_groups, "y-quantile subsets for calvalxy");
    bench_cmd->add_option("--shrink", bench.opt.shrink, "Shrinking ratio in [0,1)");
    bench_cmd->add_option("--groups", bench.opt.groups, "Contiguous groups for dual-gl");
    bench_cmd->add_option("--nu2", bench.opt.nu2, "Ridge perturbation weight for dual-ridge");
    bench_cmd->add_option("--ridge-t", bench.opt.ridge_t, "Ridge penalty t (default: 5-point CV)");
    bench_cmd->add_option("--lasso-t", bench.opt.lasso_t, "Lasso penalty t");
    bench_cmd->add_option("--out-dir", bench.common.out_dir, "Output directory")->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
        sim.seed_given = sim_seed->count() > 0;
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (split_cmd->parsed()) return run_split(split);
        if (fit_cmd->parsed()) return run_fit(fit_args);
        if (pred_cmd->parsed()) return run_predict(pred);
        if (cv_cmd->parsed()) return run_cv(cv);
        if (bench_cmd->parsed()) return run_benchmark(bench);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const IoError& e) {
        std::cerr << "IoError: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "ParseError: " << e.what() << "\n";
        return 3;
    } catch (const SingularMatrix& e) {
        std::cerr << "SingularMatrix: " << e.what() << "\n";
        return 4;
    } catch (const DegenerateThreshold& e) {
        std::cerr << "DegenerateThreshold: " << e.what() << "\n";
        return 4;
    } catch (const EmptyGrid& e) {
        std::cerr << "EmptyGrid: " << e.what() << "\n";
        return 4;
    } catch (const RankExhausted& e) {
        std::cerr << "RankExhausted: " << e.what() << "\n";
        return 4;
    } catch (const NoConvergence& e) {
        std::cerr << "NoConvergence: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args));
}

}  // namespace dspls::cli
