#pragma once

#include "wrcast/nn/tape.hpp"

#include <cstddef>
#include <vector>

namespace wrcast::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    /// One bias-corrected update from the accumulated gradients.
    void step(std::vector<Parameter>& params);
    std::size_t steps() const noexcept { return t_; }
    const AdamConfig& config() const noexcept { return cfg_; }

private:
    AdamConfig cfg_;
    std::size_t t_ = 0;
    std::vector<Tensor> m_, v_;
};

}  // namespace wrcast::nn
