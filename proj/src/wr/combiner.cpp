#include "wrcast/wr/combiner.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/random.hpp"
#include "wrcast/wr/weights.hpp"

#include <json.hpp>

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace wrcast::wr {

using nn::Tape;
using nn::Tensor;
using nn::Var;

void ComponentMatrix::validate() const {
    if (names.size() != values.size()) throw ConfigError("component names do not match component rows");
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second) throw ConfigError("duplicate component name " + n);
    for (const auto& row : values) {
        if (row.size() != horizon()) throw ConfigError("component rows have different horizons");
        for (double v : row)
            if (!std::isfinite(v)) throw ConfigError("component estimates must be finite");
    }
}

std::vector<double> combine(const std::vector<std::vector<double>>& weights, const ComponentMatrix& components,
                            std::span<const double> residuals) {
    const auto N = components.count();
    const auto H = residuals.size();
    if (weights.size() != N) throw DomainError("weight rows do not match component count");
    std::vector<double> y(H, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        if (weights[i].size() != H || components.values[i].size() != H)
            throw DomainError("weights, components and residuals disagree on the horizon");
        for (std::size_t j = 0; j < H; ++j) y[j] += weights[i][j] * components.values[i][j];
    }
    for (std::size_t j = 0; j < H; ++j) y[j] += residuals[j];
    return y;
}

namespace {

/// Final predictions (H x 1, original scale) on the tape.
Var final_prediction(Tape& tape, const nn::NetOutput& out, const nn::NetInput& in, double alpha, std::size_t N) {
    Var scaled = out.residual;
    if (N > 0) {
        const double lo = 1.0 - alpha / static_cast<double>(N);
        const Var w = tape.scale_shift(tape.softmax_rows(out.logits), alpha, lo);
        const Var s = tape.sum_cols(tape.mul(w, tape.constant(in.components)));
        scaled = tape.add(s, out.residual);
    }
    return tape.scale_shift(scaled, in.scale, 0.0);
}

Tensor column(const std::vector<double>& v) {
    Tensor t(v.size(), 1);
    t.data = v;
    return t;
}

template <class Forward>
Var batch_loss(Tape& tape, Forward forward, std::span<const nn::NetInput> batch,
               std::span<const std::vector<double>* const> targets, double alpha, std::size_t N, double quantile) {
    if (batch.empty()) throw DomainError("training batch is empty");
    if (targets.size() != batch.size()) throw DomainError("targets do not match the batch");
    std::vector<Var> losses;
    std::size_t count = 0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const auto out = forward(tape, batch[b]);
        const Var pred = final_prediction(tape, out, batch[b], alpha, N);
        if (targets[b]->size() != tape.value(pred).rows) throw DomainError("target length does not match the horizon");
        losses.push_back(tape.quantile_loss(pred, tape.constant(column(*targets[b])), quantile));
        count += targets[b]->size();
    }
    Var total = tape.concat_cols(losses);
    return tape.scale_shift(tape.sum(total), 1.0 / static_cast<double>(count), 0.0);
}

}  // namespace

nn::NetInput prepare_input(const WrModel& model, const ForecastWindow& window, const ComponentMatrix& components) {
    components.validate();
    if (components.names != model.component_names) {
        std::string want, got;
        for (const auto& n : model.component_names) want += (want.empty() ? "" : ",") + n;
        for (const auto& n : components.names) got += (got.empty() ? "" : ",") + n;
        throw ConfigError("component names [" + got + "] do not match the model's [" + want + "]");
    }
    const auto& cfg = model.network.config();
    if (window.history.size() != cfg.T || window.future_dates.size() != cfg.H)
        throw ConfigError("window shape " + std::to_string(window.history.size()) + "/" +
                          std::to_string(window.future_dates.size()) + " does not match the model's T/H " +
                          std::to_string(cfg.T) + "/" + std::to_string(cfg.H));
    if (components.count() > 0 && components.horizon() != cfg.H)
        throw ConfigError("component horizon does not match the model");
    return nn::make_net_input(window, components.values);
}

double evaluate_loss(WrModel& model, std::span<const nn::NetInput> batch,
                     std::span<const std::vector<double>* const> targets, double quantile) {
    Tape tape;
    const auto& net = std::as_const(model.network);
    const Var loss = batch_loss(
        tape, [&](Tape& t, const nn::NetInput& in) { return net.forward(t, in); }, batch, targets, model.alpha,
        model.component_names.size(), quantile);
    return tape.value(loss).data[0];
}

double train_step(WrModel& model, nn::Adam& optimizer, std::span<const nn::NetInput> batch,
                  std::span<const std::vector<double>* const> targets, const TrainConfig& cfg) {
    Tape tape;
    const Var loss = batch_loss(
        tape, [&](Tape& t, const nn::NetInput& in) { return model.network.forward(t, in); }, batch, targets,
        model.alpha, model.component_names.size(), cfg.quantile);
    const double value = tape.value(loss).data[0];
    if (!std::isfinite(value))
        throw TrainingError("training loss became non-finite after " + std::to_string(optimizer.steps()) +
                            " optimizer steps (batch of " + std::to_string(batch.size()) + " windows)");
    model.network.zero_grad();
    tape.backward(loss);
    optimizer.step(model.network.parameters());
    return value;
}

WrModel wr_train(std::span<const ForecastWindow> windows, std::span<const ComponentMatrix> components, double alpha,
                 const nn::NetConfig& net, const TrainConfig& cfg) {
    if (windows.empty()) throw DomainError("no training windows");
    if (components.size() != windows.size()) throw ConfigError("components must be given for every window");
    if (!(cfg.learning_rate >= 0.0)) throw ConfigError("learning rate must be nonnegative");
    if (cfg.batch_size == 0) throw ConfigError("batch size must be positive");
    const auto& names = components.front().names;
    for (const auto& c : components)
        if (c.names != names) throw ConfigError("inconsistent component sets across windows");
    if (!names.empty()) check_alpha(alpha, names.size());

    nn::NetConfig nc = net;
    nc.N = names.size();
    WrModel model(nc);
    model.alpha = names.empty() ? 0.0 : alpha;
    model.component_names = names;
    model.network.initialize(cfg.seed);

    std::vector<nn::NetInput> inputs;
    std::vector<const std::vector<double>*> targets;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (windows[i].target.size() != nc.H) throw ConfigError("training window has no full target block");
        inputs.push_back(prepare_input(model, windows[i], components[i]));
        targets.push_back(&windows[i].target);
    }

    nn::Adam adam({cfg.learning_rate, 0.9, 0.999, 1e-8});
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<nn::NetInput> batch;
    std::vector<const std::vector<double>*> batch_targets;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng rng(mix_seed(cfg.seed, 1000 + epoch));
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        double sum = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            batch.clear();
            batch_targets.clear();
            for (std::size_t k = start; k < std::min(order.size(), start + cfg.batch_size); ++k) {
                batch.push_back(inputs[order[k]]);
                batch_targets.push_back(targets[order[k]]);
            }
            sum += train_step(model, adam, batch, batch_targets, cfg) * static_cast<double>(batch.size());
            seen += batch.size();
        }
        model.epoch_loss.push_back(sum / static_cast<double>(seen));
    }
    return model;
}

WrOutput wr_predict(const WrModel& model, const ForecastWindow& window, const ComponentMatrix& components) {
    const auto in = prepare_input(model, window, components);
    const auto N = model.component_names.size();
    const auto H = model.network.config().H;
    Tape tape;
    const auto out = model.network.forward(tape, in);

    WrOutput r;
    r.residuals.resize(H);
    const auto& eps = tape.value(out.residual);
    for (std::size_t j = 0; j < H; ++j) r.residuals[j] = eps.data[j] * in.scale;
    r.weights.assign(N, std::vector<double>(H));
    r.modified.assign(N, std::vector<double>(H));
    if (N > 0) {
        const auto& logits = tape.value(out.logits);
        for (std::size_t j = 0; j < H; ++j) {
            const std::span<const double> row(&logits.data[j * N], N);
            const auto w = normalize_weights(row, model.alpha);
            for (std::size_t i = 0; i < N; ++i) {
                r.weights[i][j] = w[i];
                r.modified[i][j] = w[i] * components.values[i][j];
            }
        }
    }
    r.yhat = combine(r.weights, components, r.residuals);
    return r;
}

void WrModel::save_json(std::ostream& out) const {
    std::ostringstream net;
    network.save_json(net);
    nlohmann::json j;
    j["format"] = "wrcast-model";
    j["version"] = 1;
    j["alpha"] = alpha;
    j["component_names"] = component_names;
    j["epoch_loss"] = epoch_loss;
    j["network"] = nlohmann::json::parse(net.str());
    out << j.dump() << '\n';
}

WrModel WrModel::load_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("format").get<std::string>() != "wrcast-model") throw DataError("not a model checkpoint");
        const auto& jc = j.at("network").at("config");
        nn::NetConfig cfg;
        cfg.T = jc.at("T").get<std::size_t>();
        cfg.H = jc.at("H").get<std::size_t>();
        cfg.N = jc.at("N").get<std::size_t>();
        cfg.channels = jc.at("channels").get<std::size_t>();
        cfg.dilations = jc.at("dilations").get<std::vector<std::size_t>>();
        cfg.head_hidden = jc.at("head_hidden").get<std::size_t>();
        WrModel m(cfg);
        m.alpha = j.at("alpha").get<double>();
        m.component_names = j.at("component_names").get<std::vector<std::string>>();
        m.epoch_loss = j.value("epoch_loss", std::vector<double>{});
        if (m.component_names.size() != cfg.N) throw ConfigError("checkpoint component names do not match N");
        if (cfg.N > 0) check_alpha(m.alpha, cfg.N);
        std::istringstream net(j.at("network").dump());
        m.network.load_json(net);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model checkpoint: ") + e.what());
    }
}

}  // namespace wrcast::wr
