#pragma once

#include "wrcast/core/windows.hpp"
#include "wrcast/nn/tape.hpp"

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

namespace wrcast::nn {

inline constexpr std::size_t kHistoryFeatures = 6;  // y/scale, promo, festival, price ratio, weekday sin, cos
inline constexpr std::size_t kFutureFeatures = 6;   // promo, festival, price ratio, weekday sin, cos, (j+1)/H
inline constexpr Var kNoVar = std::numeric_limits<Var>::max();

struct NetConfig {
    std::size_t T = 72;
    std::size_t H = 24;
    std::size_t N = 3;  // components; 0 gives the plain forecaster
    std::size_t channels = 32;
    std::vector<std::size_t> dilations{1, 2, 4};
    std::size_t head_hidden = 32;

    bool operator==(const NetConfig&) const = default;
};

/// Scaled network inputs for one window.
struct NetInput {
    Tensor history;     // T x kHistoryFeatures
    Tensor future;      // H x kFutureFeatures
    Tensor components;  // H x N, divided by scale
    double scale = 1.0; // mean |history| + 1
};

/// `components` is N rows of H estimates (may be empty when N = 0).
NetInput make_net_input(const ForecastWindow& window, std::span<const std::vector<double>> components);

struct NetOutput {
    Var logits = kNoVar;  // H x N pre-weight scores (absent when N = 0)
    Var residual = kNoVar;  // H x 1, on the scaled axis
};

/// Dilated causal convolutional encoder over the history, a global context
/// from the last hidden state, a local context (one value per horizon) from
/// the flattened hidden states, and a per-horizon MLP head emitting N logits
/// and one residual.
class WrNetwork {
public:
    explicit WrNetwork(NetConfig cfg);

    /// Glorot-uniform weights, zero biases; the output layer starts at zero so
    /// the untrained model is the plain additive combination.
    void initialize(std::uint64_t seed);

    /// Parameters enter the tape as trainable leaves.
    NetOutput forward(Tape& tape, const NetInput& input);
    /// Parameters enter the tape as constants (inference).
    NetOutput forward(Tape& tape, const NetInput& input) const;

    const NetConfig& config() const noexcept { return cfg_; }
    std::vector<Parameter>& parameters() noexcept { return params_; }
    const std::vector<Parameter>& parameters() const noexcept { return params_; }
    std::size_t parameter_count() const;
    Parameter& parameter(const std::string& name);
    void zero_grad();

    void save_json(std::ostream& out) const;
    /// Throws ConfigError if the stored shapes differ from `cfg`'s.
    void load_json(std::istream& in);

private:
    template <class Bind>
    NetOutput run(Tape& tape, const NetInput& input, Bind bind) const;

    NetConfig cfg_;
    std::vector<Parameter> params_;
};

}  // namespace wrcast::nn
