#pragma once

// The shared deflation loop: weight from the selected penalty, score t = Xw,
// rank-one deflation of X, and regression coefficients at every order.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dspls/linalg.hpp"
#include "dspls/penalties.hpp"

namespace dspls {

enum class PenaltyKind { pls, pseudo_lasso, pseudo_group_lasso, pseudo_ls, pseudo_ridge };

const char* to_string(PenaltyKind kind);
PenaltyKind penalty_kind_from_string(const std::string& name);

struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::pls;
    std::vector<ShrinkRatio> varsigma = {ShrinkRatio(0.0)};  // one entry, or one per group
    std::optional<GroupPartition> partition;                 // pseudo_group_lasso only
    std::optional<RidgeParams> ridge;                        // pseudo_ridge only

    void validate(std::size_t n_vars) const;

    static PenaltySpec make_pls();
    static PenaltySpec make_lasso(ShrinkRatio varsigma);
    static PenaltySpec make_group_lasso(GroupPartition partition,
                                        std::vector<ShrinkRatio> varsigma);
    static PenaltySpec make_ls(ShrinkRatio varsigma);
    static PenaltySpec make_ridge(ShrinkRatio varsigma, RidgeParams params);
};

struct FittedModel {
    PenaltySpec spec;
    std::size_t n_components = 0;  // components actually built
    std::size_t n_requested = 0;
    bool rank_exhausted = false;
    std::size_t n_vars = 0;
    CenteringStats centering;
    Matrix weights;                   // one component per row, n_components x P
    Matrix scores;                    // one component per row, n_components x N
    std::vector<Vector> coefficients; // regression coefficients per order 1..M
    std::vector<std::vector<ThresholdLog>> threshold_log;  // per component (per group)
    Vector fitted_values;             // training fit at the final order
};

FittedModel fit(const Matrix& X, const Vector& y, const PenaltySpec& spec,
                std::size_t n_components);

Vector predict(const FittedModel& model, const Matrix& X_new, std::size_t order);

const Vector& coefficients(const FittedModel& model, std::size_t order);

std::string to_json_string(const FittedModel& model);
FittedModel model_from_json_string(const std::string& text);
void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

}  // namespace dspls
