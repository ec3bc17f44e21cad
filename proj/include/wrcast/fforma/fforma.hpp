#pragma once

#include "wrcast/classical/registry.hpp"
#include "wrcast/fforma/features.hpp"
#include "wrcast/gbdt/boosting.hpp"

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace wrcast::fforma {

struct FformaParams {
    std::size_t horizon = 7;       // validation block at the end of each training history
    double quantile = 0.5;         // per-method loss is the mean quantile loss at this level
    double penalty_factor = 10.0;  // failed (window, method) cells get this times the largest finite loss
    std::size_t min_windows = 20;
    gbdt::GbdtParams boosting{100, 0.1, {3, 1}};
};

/// Features and per-method validation losses for each training window.
struct LossTable {
    std::vector<std::string> methods;
    gbdt::Matrix features;  // windows x kMetaFeatureCount
    gbdt::Matrix losses;    // windows x methods
};

/// Fits every method on history[0, T-H) and scores it on the last H points.
LossTable build_loss_table(std::span<const std::vector<double>> histories,
                           std::span<const classical::CandidateMethod> methods, const FformaParams& params);

class MetaLearner {
public:
    std::vector<std::string> methods;
    gbdt::GbdtModel scorer;  // one output per method

    /// Softmax of the method scores at these features.
    std::vector<double> weights(const MetaFeatures& features) const;
    /// Objective sum_n sum_m w_m(f_n) L_m(f_n) / rows, with each row's losses
    /// divided by the row mean, per boosting round.
    const std::vector<double>& objective_history() const noexcept { return scorer.loss_history; }

    void save_json(std::ostream& out) const;
    static MetaLearner load_json(std::istream& in);
};

/// Trains the multi-output scorer on a precomputed table.
MetaLearner fforma_train_from_table(const LossTable& table, const FformaParams& params);

MetaLearner fforma_train(std::span<const std::vector<double>> histories,
                         std::span<const classical::CandidateMethod> methods, const FformaParams& params);

/// Weighted combination of the method forecasts. Methods that throw or return
/// non-finite values are dropped and the remaining weights renormalised.
std::vector<double> fforma_predict(const MetaLearner& learner, std::span<const classical::CandidateMethod> methods,
                                   std::span<const double> history, std::size_t horizon);

std::vector<double> softmax(std::span<const double> scores);

}  // namespace wrcast::fforma
