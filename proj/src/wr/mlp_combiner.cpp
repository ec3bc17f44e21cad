#include "wrcast/wr/mlp_combiner.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/random.hpp"

#include <cmath>
#include <numeric>

namespace wrcast::wr {

using nn::Tape;
using nn::Tensor;
using nn::Var;

MlpCombiner::MlpCombiner(std::size_t T, std::size_t H, std::vector<std::string> names, std::size_t hidden,
                         std::size_t recent)
    : T_(T), H_(H), hidden_(hidden), recent_(std::min(recent, T)), names_(std::move(names)) {
    if (T == 0 || H == 0 || hidden == 0) throw ConfigError("combiner dimensions must be positive");
    const auto N = names_.size();
    const auto in = N + nn::kFutureFeatures + recent_;
    params_.emplace_back("hidden.w", in, hidden_);
    params_.emplace_back("hidden.b", 1, hidden_);
    params_.emplace_back("out.w", hidden_, N + 1);
    params_.emplace_back("out.b", 1, N + 1);
}

void MlpCombiner::initialize(std::uint64_t seed) {
    Rng rng(seed);
    auto& w = params_[0].value;
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
    for (auto& v : w.data) v = rng.uniform(-limit, limit);
    for (std::size_t k = 1; k < params_.size(); ++k) std::fill(params_[k].value.data.begin(), params_[k].value.data.end(), 0.0);
    for (auto& p : params_) p.zero_grad();
}

nn::NetInput MlpCombiner::input(const ForecastWindow& window, const ComponentMatrix& components) const {
    components.validate();
    if (components.names != names_) throw ConfigError("component names do not match the combiner");
    if (window.history.size() != T_ || window.future_dates.size() != H_)
        throw ConfigError("window shape does not match the combiner");
    return nn::make_net_input(window, components.values);
}

Tensor MlpCombiner::features(const nn::NetInput& in) const {
    const auto N = names_.size();
    Tensor x(H_, N + nn::kFutureFeatures + recent_);
    for (std::size_t j = 0; j < H_; ++j) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < N; ++i) x(j, c++) = in.components(j, i);
        for (std::size_t f = 0; f < nn::kFutureFeatures; ++f) x(j, c++) = in.future(j, f);
        for (std::size_t r = 0; r < recent_; ++r) x(j, c++) = in.history(T_ - recent_ + r, 0);
    }
    return x;
}

namespace {

struct Graph {
    Var free_weights;  // H x N (already 1 + output)
    Var residual;      // H x 1
    Var prediction;    // H x 1, original scale
};

template <class Bind>
Graph build(Tape& tape, const Tensor& x, const nn::NetInput& in, std::size_t N, Bind bind) {
    const Var h = tape.relu(tape.add_row(tape.matmul(tape.constant(x), bind(0)), bind(1)));
    const Var out = tape.add_row(tape.matmul(h, bind(2)), bind(3));  // H x (N+1)
    // Split the output columns with fixed selector matrices.
    Tensor pick_w(N + 1, N), pick_e(N + 1, 1);
    for (std::size_t i = 0; i < N; ++i) pick_w(i, i) = 1.0;
    pick_e(N, 0) = 1.0;
    Graph g;
    g.residual = tape.matmul(out, tape.constant(std::move(pick_e)));
    Var scaled = g.residual;
    if (N > 0) {
        g.free_weights = tape.scale_shift(tape.matmul(out, tape.constant(std::move(pick_w))), 1.0, 1.0);
        scaled = tape.add(tape.sum_cols(tape.mul(g.free_weights, tape.constant(in.components))), g.residual);
    }
    g.prediction = tape.scale_shift(scaled, in.scale, 0.0);
    return g;
}

}  // namespace

void MlpCombiner::train(std::span<const ForecastWindow> windows, std::span<const ComponentMatrix> components,
                        const TrainConfig& cfg) {
    if (windows.empty() || windows.size() != components.size()) throw ConfigError("combiner needs windows with components");
    if (cfg.batch_size == 0) throw ConfigError("batch size must be positive");
    initialize(cfg.seed);
    std::vector<nn::NetInput> inputs;
    std::vector<Tensor> feats;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (windows[i].target.size() != H_) throw ConfigError("training window has no full target block");
        inputs.push_back(input(windows[i], components[i]));
        feats.push_back(features(inputs.back()));
    }
    nn::Adam adam({cfg.learning_rate, 0.9, 0.999, 1e-8});
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    epoch_loss_.clear();
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng rng(mix_seed(cfg.seed, 1000 + epoch));
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        double sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const auto stop = std::min(order.size(), start + cfg.batch_size);
            Tape tape;
            std::vector<Var> losses;
            for (std::size_t k = start; k < stop; ++k) {
                const auto idx = order[k];
                const auto g = build(tape, feats[idx], inputs[idx], names_.size(),
                                     [&](std::size_t p) { return tape.param(params_[p]); });
                Tensor y(H_, 1);
                y.data = windows[idx].target;
                losses.push_back(tape.quantile_loss(g.prediction, tape.constant(std::move(y)), cfg.quantile));
            }
            const double count = static_cast<double>((stop - start) * H_);
            const Var loss = tape.scale_shift(tape.sum(tape.concat_cols(losses)), 1.0 / count, 0.0);
            const double value = tape.value(loss).data[0];
            if (!std::isfinite(value)) throw TrainingError("combiner loss became non-finite");
            for (auto& p : params_) p.zero_grad();
            tape.backward(loss);
            adam.step(params_);
            sum += value * static_cast<double>(stop - start);
        }
        epoch_loss_.push_back(sum / static_cast<double>(order.size()));
    }
}

WrOutput MlpCombiner::predict(const ForecastWindow& window, const ComponentMatrix& components) const {
    const auto in = input(window, components);
    const auto N = names_.size();
    Tape tape;
    const auto g = build(tape, features(in), in, N, [&](std::size_t p) { return tape.constant(params_[p].value); });
    WrOutput r;
    r.residuals.resize(H_);
    for (std::size_t j = 0; j < H_; ++j) r.residuals[j] = tape.value(g.residual).data[j] * in.scale;
    r.weights.assign(N, std::vector<double>(H_, 1.0));
    r.modified.assign(N, std::vector<double>(H_));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < H_; ++j) {
            r.weights[i][j] = tape.value(g.free_weights)(j, i);
            r.modified[i][j] = r.weights[i][j] * components.values[i][j];
        }
    r.yhat = combine(r.weights, components, r.residuals);
    return r;
}

}  // namespace wrcast::wr
