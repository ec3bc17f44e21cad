#pragma once

#include "wrcast/wr/combiner.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wrcast::wr {

/// Plain two-layer MLP applied per horizon to (scaled components, future
/// covariates, last `recent` scaled observations). It emits N free weights
/// (1 + output, no sum or interval constraint) and a residual; there is no
/// sequence encoder and no global/local context.
class MlpCombiner {
public:
    MlpCombiner(std::size_t T, std::size_t H, std::vector<std::string> component_names, std::size_t hidden = 32,
                std::size_t recent = 7);

    void initialize(std::uint64_t seed);
    void train(std::span<const ForecastWindow> windows, std::span<const ComponentMatrix> components,
               const TrainConfig& cfg);
    WrOutput predict(const ForecastWindow& window, const ComponentMatrix& components) const;

    const std::vector<double>& epoch_loss() const noexcept { return epoch_loss_; }
    const std::vector<std::string>& component_names() const noexcept { return names_; }

private:
    nn::Tensor features(const nn::NetInput& in) const;
    nn::NetInput input(const ForecastWindow& window, const ComponentMatrix& components) const;

    std::size_t T_, H_, hidden_, recent_;
    std::vector<std::string> names_;
    std::vector<nn::Parameter> params_;
    std::vector<double> epoch_loss_;
};

}  // namespace wrcast::wr
