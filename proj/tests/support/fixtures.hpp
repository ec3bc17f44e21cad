#pragma once

#include "wrcast/core/random.hpp"
#include "wrcast/core/windows.hpp"
#include "wrcast/nn/network.hpp"
#include "wrcast/nn/tape.hpp"
#include "wrcast/wr/combiner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wrcast::testing {

// Window with a noisy level series; a promo on one future day.
inline ForecastWindow random_window(std::size_t T, std::size_t H, std::uint64_t seed, double level = 50.0) {
    Rng rng(seed);
    ForecastWindow w;
    Date d = make_date(2022, 3, 1);
    for (std::size_t t = 0; t < T; ++t, d += std::chrono::days{1}) {
        w.history.push_back(level + rng.normal(0, 5));
        w.history_dates.push_back(d);
        CovariateRow c;
        c.price = c.reference_price = 10.0;
        if (rng.bernoulli(0.1)) c.promo_type = "coupon", c.price = 8.0;
        w.history_covariates.push_back(c);
    }
    for (std::size_t j = 0; j < H; ++j, d += std::chrono::days{1}) {
        w.future_dates.push_back(d);
        CovariateRow c;
        c.price = c.reference_price = 10.0;
        if (j == 1) c.promo_type = "coupon", c.price = 9.0;
        w.future_covariates.push_back(c);
        w.target.push_back(level + rng.normal(0, 5));
    }
    w.anchor = T;
    return w;
}

inline wr::ComponentMatrix components_for(const ForecastWindow& w, std::size_t N, std::uint64_t seed) {
    Rng rng(seed);
    wr::ComponentMatrix c;
    for (std::size_t i = 0; i < N; ++i) {
        c.names.push_back("c" + std::to_string(i));
        std::vector<double> row;
        for (double y : w.target) row.push_back(y / double(N) * rng.uniform(0.7, 1.3));
        c.values.push_back(row);
    }
    return c;
}

inline void randomize(nn::WrNetwork& net, std::uint64_t seed, double sd = 0.3) {
    Rng rng(seed);
    for (auto& p : net.parameters())
        for (auto& v : p.value.data) v = rng.normal(0, sd);
}

// Smooth readout of both heads: sum(C1 . softmax(logits)) + sum(C2 . residual).
struct Readout {
    nn::Tensor c1, c2;
    template <class Net>
    nn::Var build(nn::Tape& tape, Net& net, const nn::NetInput& in) const {
        const auto out = net.forward(tape, in);
        nn::Var total = tape.sum(tape.mul(out.residual, tape.constant(c2)));
        if (out.logits != nn::kNoVar)
            total = tape.add(total, tape.sum(tape.mul(tape.softmax_rows(out.logits), tape.constant(c1))));
        return total;
    }
};

inline std::string layer_type(const std::string& name) {
    auto base = name.substr(0, name.rfind('.'));
    if (base.rfind("conv", 0) == 0) base = "conv";
    return base;
}

struct GradCheck {
    double max_rel_error = 0.0;
    std::size_t checked = 0;
    std::map<std::string, double> per_type;
};

// Central differences at 1e-5 against the tape; a second, smaller stencil is
// tried when the first straddles a relu kink.
inline GradCheck network_gradient_check(std::size_t per_type, std::uint64_t seed) {
    nn::NetConfig cfg{16, 4, 3, 6, {1, 2}, 8};
    nn::WrNetwork net(cfg);
    randomize(net, seed);
    const auto w = random_window(cfg.T, cfg.H, mix_seed(seed, 1));
    const auto comp = components_for(w, cfg.N, mix_seed(seed, 2));
    const auto in = nn::make_net_input(w, comp.values);
    Rng rng(mix_seed(seed, 3));
    Readout r{nn::Tensor(cfg.H, cfg.N), nn::Tensor(cfg.H, 1)};
    for (auto& v : r.c1.data) v = rng.normal();
    for (auto& v : r.c2.data) v = rng.normal();

    net.zero_grad();
    {
        nn::Tape tape;
        tape.backward(r.build(tape, net, in));
    }
    auto loss_at = [&]() {
        nn::Tape tape;
        const nn::WrNetwork& cnet = net;
        return tape.value(r.build(tape, cnet, in))(0, 0);
    };

    std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> slots;
    for (std::size_t p = 0; p < net.parameters().size(); ++p)
        for (std::size_t k = 0; k < net.parameters()[p].value.size(); ++k)
            slots[layer_type(net.parameters()[p].name)].push_back({p, k});

    GradCheck out;
    for (auto& [type, list] : slots) {
        double worst = 0.0;
        for (std::size_t s = 0; s < per_type; ++s) {
            const auto [p, k] = list[rng.below(list.size())];
            auto& param = net.parameters()[p];
            const double analytic = param.grad.data[k];
            const double orig = param.value.data[k];
            double best = 1e300;
            for (double h : {1e-5, 1e-6}) {
                param.value.data[k] = orig + h;
                const double up = loss_at();
                param.value.data[k] = orig - h;
                const double down = loss_at();
                param.value.data[k] = orig;
                const double numeric = (up - down) / (2 * h);
                const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
                best = std::min(best, std::abs(analytic - numeric) / denom);
                if (best <= 1e-4) break;
            }
            worst = std::max(worst, best);
            ++out.checked;
        }
        out.per_type[type] = worst;
        out.max_rel_error = std::max(out.max_rel_error, worst);
    }
    return out;
}

}  // namespace wrcast::testing
