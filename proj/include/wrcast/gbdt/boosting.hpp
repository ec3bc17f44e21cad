#pragma once

#include "wrcast/gbdt/tree.hpp"

#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace wrcast::gbdt {

struct GbdtParams {
    std::size_t n_trees = 100;
    double learning_rate = 0.1;
    TreeParams tree{};
};

/// One boosting round: one tree per output and the line-search step.
struct BoostRound {
    double step = 1.0;  // rho_n
    std::vector<RegressionTree> trees;
};

/// prediction_k(x) = base_k + sum_n step_n * learning_rate * tree_{n,k}(x).
class GbdtModel {
public:
    std::string objective = "squared";  // squared | custom
    std::vector<double> base;           // F_0 per output
    double learning_rate = 0.1;
    std::size_t n_features = 0;
    std::vector<BoostRound> rounds;
    std::vector<double> loss_history;   // training objective before round 1, after each round

    std::size_t outputs() const noexcept { return base.size(); }
    /// All outputs; throws DomainError on a feature-length mismatch.
    std::vector<double> predict(std::span<const double> x) const;
    /// Single-output models only.
    double predict_scalar(std::span<const double> x) const;

    void save_json(std::ostream& out) const;
    static GbdtModel load_json(std::istream& in);
};

/// Least-squares boosting: F_0 = mean(y); each round fits a tree to y - F_{n-1}
/// and picks the step by exact line search.
GbdtModel gbdt_fit(const Matrix& X, std::span<const double> y, const GbdtParams& params);

/// Vector-valued second-order objective. `evaluate` receives current scores
/// (rows x outputs) and returns the objective; when grad/hess are non-null it
/// also fills them (same shape).
struct CustomObjective {
    std::size_t outputs = 1;
    std::function<double(const Matrix& scores, Matrix* grad, Matrix* hess)> evaluate;
};

/// Newton boosting with one ensemble per output sharing the round loop. Trees
/// are fitted to -g with hessian h; the round step is halved from 1 until the
/// objective does not increase (0 if no halving helps). Throws TrainingError
/// naming the round when a gradient or hessian is non-finite.
GbdtModel gbdt_fit_custom(const Matrix& X, const CustomObjective& objective, std::span<const double> base,
                          const GbdtParams& params);

}  // namespace wrcast::gbdt
