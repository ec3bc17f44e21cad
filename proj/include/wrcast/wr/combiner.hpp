#pragma once

#include "wrcast/core/windows.hpp"
#include "wrcast/nn/adam.hpp"
#include "wrcast/nn/network.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace wrcast::wr {

/// Stage-1 estimates for one window: values[i][j] is component i at horizon j.
struct ComponentMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;

    std::size_t count() const noexcept { return values.size(); }
    std::size_t horizon() const noexcept { return values.empty() ? 0 : values.front().size(); }
    /// Throws ConfigError on duplicate names, ragged rows or non-finite values.
    void validate() const;
};

struct WrOutput {
    std::vector<std::vector<double>> weights;   // N x H
    std::vector<double> residuals;              // H
    std::vector<std::vector<double>> modified;  // N x H, w * l_hat
    std::vector<double> yhat;                   // H
};

/// yhat_j = sum_i w_ij * l_hat_ij + eps_j, summed in component order.
std::vector<double> combine(const std::vector<std::vector<double>>& weights, const ComponentMatrix& components,
                            std::span<const double> residuals);

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    std::size_t epochs = 20;
    std::uint64_t seed = 0;
    double quantile = 0.5;
};

/// Trained stage-2 state.
struct WrModel {
    nn::WrNetwork network;
    double alpha = 1.0;
    std::vector<std::string> component_names;
    std::vector<double> epoch_loss;

    explicit WrModel(nn::NetConfig cfg) : network(std::move(cfg)) {}

    void save_json(std::ostream& out) const;
    static WrModel load_json(std::istream& in);
};

/// A training example: window (with target) plus its components.
struct Sample {
    const ForecastWindow* window = nullptr;
    const ComponentMatrix* components = nullptr;
};

/// Builds the network input of one sample and checks it against the model.
nn::NetInput prepare_input(const WrModel& model, const ForecastWindow& window, const ComponentMatrix& components);

/// Mean pinball loss of the final predictions over the batch on the original
/// scale; one Adam update. Returns the loss before the update. Throws
/// TrainingError if the loss is not finite.
double train_step(WrModel& model, nn::Adam& optimizer, std::span<const nn::NetInput> batch,
                  std::span<const std::vector<double>* const> targets, const TrainConfig& cfg);

/// Same loss without updating anything.
double evaluate_loss(WrModel& model, std::span<const nn::NetInput> batch,
                     std::span<const std::vector<double>* const> targets, double quantile);

/// Initialises the network from cfg.seed and trains it for cfg.epochs over
/// shuffled mini-batches. With no component names the model is the plain
/// network forecaster.
WrModel wr_train(std::span<const ForecastWindow> windows, std::span<const ComponentMatrix> components, double alpha,
                 const nn::NetConfig& net, const TrainConfig& cfg);

/// Throws ConfigError when the component names differ from the model's.
WrOutput wr_predict(const WrModel& model, const ForecastWindow& window, const ComponentMatrix& components);

}  // namespace wrcast::wr
