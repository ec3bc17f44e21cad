#include "wrcast/nn/network.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/random.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>

namespace wrcast::nn {

namespace {

double price_ratio(const CovariateRow& c) {
    if (std::isfinite(c.price) && c.price > 0.0 && std::isfinite(c.reference_price) && c.reference_price > 0.0)
        return c.price / c.reference_price;
    return 1.0;
}

void calendar_pair(Date d, double& s, double& c) {
    const double wd = calendar_fields(d).weekday;
    s = std::sin(2.0 * std::numbers::pi * wd / 7.0);
    c = std::cos(2.0 * std::numbers::pi * wd / 7.0);
}

}  // namespace

NetInput make_net_input(const ForecastWindow& w, std::span<const std::vector<double>> components) {
    const auto T = w.history.size();
    const auto H = w.future_dates.size();
    NetInput in;
    double m = 0.0;
    for (double v : w.history) m += std::abs(v);
    in.scale = (T ? m / static_cast<double>(T) : 0.0) + 1.0;

    in.history = Tensor(T, kHistoryFeatures);
    for (std::size_t t = 0; t < T; ++t) {
        const auto& c = w.history_covariates.empty() ? CovariateRow{} : w.history_covariates[t];
        in.history(t, 0) = w.history[t] / in.scale;
        in.history(t, 1) = c.on_promotion() ? 1.0 : 0.0;
        in.history(t, 2) = c.on_festival() ? 1.0 : 0.0;
        in.history(t, 3) = price_ratio(c);
        calendar_pair(w.history_dates[t], in.history(t, 4), in.history(t, 5));
    }
    in.future = Tensor(H, kFutureFeatures);
    for (std::size_t j = 0; j < H; ++j) {
        const auto& c = w.future_covariates.empty() ? CovariateRow{} : w.future_covariates[j];
        in.future(j, 0) = c.on_promotion() ? 1.0 : 0.0;
        in.future(j, 1) = c.on_festival() ? 1.0 : 0.0;
        in.future(j, 2) = price_ratio(c);
        calendar_pair(w.future_dates[j], in.future(j, 3), in.future(j, 4));
        in.future(j, 5) = static_cast<double>(j + 1) / static_cast<double>(H);
    }
    in.components = Tensor(H, components.size());
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].size() != H) throw ConfigError("component length does not match the horizon");
        for (std::size_t j = 0; j < H; ++j) in.components(j, i) = components[i][j] / in.scale;
    }
    return in;
}

WrNetwork::WrNetwork(NetConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.T == 0 || cfg_.H == 0 || cfg_.channels == 0 || cfg_.head_hidden == 0 || cfg_.dilations.empty())
        throw ConfigError("network dimensions must be positive");
    const auto C = cfg_.channels;
    std::size_t cin = kHistoryFeatures;
    for (std::size_t l = 0; l < cfg_.dilations.size(); ++l) {
        params_.emplace_back("conv" + std::to_string(l) + ".w", 2 * cin, C);
        params_.emplace_back("conv" + std::to_string(l) + ".b", 1, C);
        cin = C;
    }
    params_.emplace_back("global.w", C, C);
    params_.emplace_back("global.b", 1, C);
    params_.emplace_back("local.w", cfg_.T * C, cfg_.H);
    params_.emplace_back("local.b", 1, cfg_.H);
    const auto head_in = C + 1 + kFutureFeatures + cfg_.N;
    params_.emplace_back("head.hidden.w", head_in, cfg_.head_hidden);
    params_.emplace_back("head.hidden.b", 1, cfg_.head_hidden);
    if (cfg_.N > 0) {
        params_.emplace_back("head.logits.w", cfg_.head_hidden, cfg_.N);
        params_.emplace_back("head.logits.b", 1, cfg_.N);
    }
    params_.emplace_back("head.residual.w", cfg_.head_hidden, 1);
    params_.emplace_back("head.residual.b", 1, 1);
}

void WrNetwork::initialize(std::uint64_t seed) {
    Rng rng(seed);
    for (auto& p : params_) {
        p.zero_grad();
        const bool bias = p.value.rows == 1 && p.name.ends_with(".b");
        const bool output = p.name.starts_with("head.logits") || p.name.starts_with("head.residual");
        if (bias || output) {
            std::fill(p.value.data.begin(), p.value.data.end(), 0.0);
            continue;
        }
        const double limit = std::sqrt(6.0 / static_cast<double>(p.value.rows + p.value.cols));
        for (auto& v : p.value.data) v = rng.uniform(-limit, limit);
    }
}

Parameter& WrNetwork::parameter(const std::string& name) {
    for (auto& p : params_)
        if (p.name == name) return p;
    throw ConfigError("no parameter named " + name);
}

std::size_t WrNetwork::parameter_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.value.size();
    return n;
}

void WrNetwork::zero_grad() {
    for (auto& p : params_) p.zero_grad();
}

NetOutput WrNetwork::forward(Tape& tape, const NetInput& in) {
    return run(tape, in, [&](std::size_t k) { return tape.param(params_[k]); });
}

NetOutput WrNetwork::forward(Tape& tape, const NetInput& in) const {
    return run(tape, in, [&](std::size_t k) { return tape.constant(params_[k].value); });
}

template <class Bind>
NetOutput WrNetwork::run(Tape& tape, const NetInput& in, Bind bind) const {
    const auto T = cfg_.T, H = cfg_.H;
    if (in.history.rows != T || in.history.cols != kHistoryFeatures)
        throw ConfigError("history block is " + std::to_string(in.history.rows) + "x" +
                          std::to_string(in.history.cols) + ", network expects " + std::to_string(T) + "x" +
                          std::to_string(kHistoryFeatures));
    if (in.future.rows != H || in.future.cols != kFutureFeatures)
        throw ConfigError("future covariate block does not match the network horizon");
    if (in.components.rows != H || in.components.cols != cfg_.N)
        throw ConfigError("component block is " + std::to_string(in.components.rows) + "x" +
                          std::to_string(in.components.cols) + ", network expects " + std::to_string(H) + "x" +
                          std::to_string(cfg_.N));

    std::size_t k = 0;
    auto next = [&]() -> Var { return bind(k++); };

    Var h = tape.constant(in.history);
    for (auto d : cfg_.dilations) {
        const Var w = next();
        const Var b = next();
        h = tape.relu(tape.conv1d_causal(h, w, b, d));
    }
    const Var gw = next(), gb = next();
    const Var c_a = tape.relu(tape.add_row(tape.matmul(tape.slice_rows(h, T - 1, 1), gw), gb));
    const Var lw = next(), lb = next();
    const Var c_local = tape.add_row(tape.matmul(tape.flatten(h), lw), lb);  // 1 x H

    // Local context is a row over horizons; the head wants it as a column.
    Tensor eye(H, H);
    for (std::size_t j = 0; j < H; ++j) eye(j, j) = 1.0;
    const Var c_col = tape.sum_cols(tape.mul(tape.broadcast_rows(c_local, H), tape.constant(std::move(eye))));

    std::vector<Var> parts{tape.broadcast_rows(c_a, H), c_col, tape.constant(in.future)};
    if (cfg_.N > 0) parts.push_back(tape.constant(in.components));
    const Var x = tape.concat_cols(parts);
    const Var hw = next(), hb = next();
    const Var hidden = tape.relu(tape.add_row(tape.matmul(x, hw), hb));

    NetOutput out;
    if (cfg_.N > 0) {
        const Var ow = next(), ob = next();
        out.logits = tape.add_row(tape.matmul(hidden, ow), ob);
    }
    const Var rw = next(), rb = next();
    out.residual = tape.add_row(tape.matmul(hidden, rw), rb);
    return out;
}

void WrNetwork::save_json(std::ostream& out) const {
    nlohmann::json j;
    j["format"] = "wrcast-network";
    j["version"] = 1;
    j["config"] = {{"T", cfg_.T},
                   {"H", cfg_.H},
                   {"N", cfg_.N},
                   {"channels", cfg_.channels},
                   {"dilations", cfg_.dilations},
                   {"head_hidden", cfg_.head_hidden}};
    auto ps = nlohmann::json::array();
    for (const auto& p : params_)
        ps.push_back({{"name", p.name}, {"rows", p.value.rows}, {"cols", p.value.cols}, {"data", p.value.data}});
    j["parameters"] = std::move(ps);
    out << j.dump() << '\n';
}

void WrNetwork::load_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("format").get<std::string>() != "wrcast-network") throw DataError("not a network checkpoint");
        if (j.at("version").get<int>() != 1) throw DataError("unsupported network checkpoint version");
        const auto& jc = j.at("config");
        NetConfig stored;
        stored.T = jc.at("T").get<std::size_t>();
        stored.H = jc.at("H").get<std::size_t>();
        stored.N = jc.at("N").get<std::size_t>();
        stored.channels = jc.at("channels").get<std::size_t>();
        stored.dilations = jc.at("dilations").get<std::vector<std::size_t>>();
        stored.head_hidden = jc.at("head_hidden").get<std::size_t>();
        if (!(stored == cfg_)) throw ConfigError("checkpoint network shape does not match the configured network");
        const auto& ps = j.at("parameters");
        if (ps.size() != params_.size()) throw ConfigError("checkpoint parameter count does not match");
        std::vector<Tensor> loaded;
        for (std::size_t i = 0; i < params_.size(); ++i) {
            const auto& jp = ps[i];
            const auto& p = params_[i];
            if (jp.at("name").get<std::string>() != p.name || jp.at("rows").get<std::size_t>() != p.value.rows ||
                jp.at("cols").get<std::size_t>() != p.value.cols)
                throw ConfigError("checkpoint parameter " + p.name + " has a different shape");
            Tensor t(p.value.rows, p.value.cols);
            t.data = jp.at("data").get<std::vector<double>>();
            if (t.data.size() != p.value.size()) throw ConfigError("checkpoint parameter " + p.name + " is truncated");
            loaded.push_back(std::move(t));
        }
        for (std::size_t i = 0; i < params_.size(); ++i) {
            params_[i].value = std::move(loaded[i]);
            params_[i].zero_grad();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed network checkpoint: ") + e.what());
    }
}

}  // namespace wrcast::nn
