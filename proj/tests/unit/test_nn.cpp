#include "doctest.h"

#include "../support/fixtures.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/nn/adam.hpp"
#include "wrcast/nn/network.hpp"
#include "wrcast/nn/tape.hpp"
#include "wrcast/wr/combiner.hpp"

#include <sstream>

using namespace wrcast;
using namespace wrcast::nn;

namespace {

const NetConfig kSmall{16, 4, 3, 6, {1, 2}, 8};

Tensor run(const WrNetwork& net, const NetInput& in, bool logits) {
    Tape tape;
    const auto out = net.forward(tape, in);
    return tape.value(logits ? out.logits : out.residual);
}

}  // namespace

TEST_SUITE("neural") {

TEST_CASE("square gradient") {
    Parameter w("w", 1, 1);
    w.value(0, 0) = 3.0;
    Tape tape;
    const Var v = tape.param(w);
    tape.backward(tape.sum(tape.mul(v, v)));
    CHECK(w.grad(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("quantile loss subgradient") {
    Parameter yhat("yhat", 1, 1);
    yhat.value(0, 0) = 8.0;
    Tape tape;
    Tensor y(1, 1, 10.0);
    const Var l = tape.quantile_loss(tape.param(yhat), tape.constant(y), 0.5);
    CHECK(tape.value(l)(0, 0) == doctest::Approx(1.0));
    tape.backward(l);
    CHECK(yhat.grad(0, 0) == doctest::Approx(-0.5));

    Parameter tie("tie", 1, 1);
    tie.value(0, 0) = 10.0;
    Tape t2;
    const Var l2 = t2.quantile_loss(t2.param(tie), t2.constant(y), 0.9);
    t2.backward(l2);
    CHECK(tie.grad(0, 0) == 0.0);
}

TEST_CASE("tape state errors") {
    Tape tape;
    CHECK_THROWS_AS(tape.backward(0), StateError);
    const Var c = tape.constant(Tensor(2, 2, 1.0));
    CHECK_THROWS_AS(tape.backward(c), StateError);  // not 1 x 1
}

TEST_CASE("conv1d is causal") {
    Parameter w("w", 2, 1), b("b", 1, 1);
    w.value(0, 0) = 1.0;  // x[t]
    w.value(1, 0) = 10.0; // x[t-d]
    Tape tape;
    Tensor x(4, 1);
    x.data = {1, 2, 3, 4};
    const auto y = tape.value(tape.conv1d_causal(tape.constant(x), tape.param(w), tape.param(b), 2));
    CHECK(y.data == std::vector<double>{1, 2, 13, 24});
}

TEST_CASE("zero network gives zero logits and the residual bias") {
    WrNetwork net(kSmall);
    net.initialize(1);
    for (auto& p : net.parameters()) std::fill(p.value.data.begin(), p.value.data.end(), 0.0);
    net.parameter("head.residual.b").value(0, 0) = 0.7;
    const auto w = testing::random_window(16, 4, 2);
    const auto c = testing::components_for(w, 3, 3);
    const auto in = make_net_input(w, c.values);
    for (double v : run(net, in, true).data) CHECK(v == 0.0);
    for (double v : run(net, in, false).data) CHECK(v == doctest::Approx(0.7));
}

TEST_CASE("initialized network starts at zero output") {
    WrNetwork net(kSmall);
    net.initialize(9);
    const auto w = testing::random_window(16, 4, 2);
    const auto in = make_net_input(w, testing::components_for(w, 3, 3).values);
    for (double v : run(net, in, true).data) CHECK(v == 0.0);
    for (double v : run(net, in, false).data) CHECK(v == 0.0);
}

TEST_CASE("future targets are not inputs") {
    WrNetwork net(kSmall);
    testing::randomize(net, 4);
    auto w = testing::random_window(16, 4, 5);
    const auto c = testing::components_for(w, 3, 6);
    const auto a = run(net, make_net_input(w, c.values), false);
    w.target[0] += 1000.0;
    const auto b = run(net, make_net_input(w, c.values), false);
    CHECK(a.data == b.data);
}

TEST_CASE("dead relu path") {
    WrNetwork net(kSmall);
    testing::randomize(net, 7);
    net.parameter("head.hidden.b").value(0, 0) = -1e6;
    const auto w = testing::random_window(16, 4, 8);
    const auto in = make_net_input(w, testing::components_for(w, 3, 9).values);
    const auto a = run(net, in, true);
    auto& lw = net.parameter("head.logits.w");
    for (std::size_t c = 0; c < lw.value.cols; ++c) lw.value(0, c) *= 2.0;
    const auto b = run(net, in, true);
    CHECK(a.data == b.data);
}

TEST_CASE("network gradient matches central differences") {
    const auto r = testing::network_gradient_check(50, 11);
    CHECK(r.per_type.size() == 6);
    for (const auto& [type, err] : r.per_type) {
        INFO(type);
        CHECK(err <= 1e-4);
    }
}

TEST_CASE("save and load") {
    WrNetwork net(kSmall);
    testing::randomize(net, 12);
    std::stringstream ss;
    net.save_json(ss);
    WrNetwork back(kSmall);
    back.load_json(ss);
    for (std::size_t p = 0; p < net.parameters().size(); ++p)
        CHECK(net.parameters()[p].value.data == back.parameters()[p].value.data);
    NetConfig other = kSmall;
    other.channels = 7;
    WrNetwork wrong(other);
    std::stringstream again;
    net.save_json(again);
    CHECK_THROWS_AS(wrong.load_json(again), ConfigError);
}

TEST_CASE("adam with zero learning rate leaves parameters unchanged") {
    wr::WrModel m(kSmall);
    m.component_names = {"c0", "c1", "c2"};
    m.network.initialize(3);
    testing::randomize(m.network, 13, 0.1);
    std::vector<ForecastWindow> ws;
    std::vector<wr::ComponentMatrix> cs;
    for (std::uint64_t s = 0; s < 4; ++s) {
        ws.push_back(testing::random_window(16, 4, 100 + s));
        cs.push_back(testing::components_for(ws.back(), 3, 200 + s));
    }
    std::vector<NetInput> batch;
    std::vector<const std::vector<double>*> targets;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        batch.push_back(wr::prepare_input(m, ws[i], cs[i]));
        targets.push_back(&ws[i].target);
    }
    const auto before = m.network.parameters();
    const double pre = wr::evaluate_loss(m, batch, targets, 0.5);
    Adam opt({0.0});
    wr::TrainConfig tc;
    tc.learning_rate = 0.0;
    const double l = wr::train_step(m, opt, batch, targets, tc);
    CHECK(l == doctest::Approx(pre));
    for (std::size_t p = 0; p < before.size(); ++p) CHECK(before[p].value.data == m.network.parameters()[p].value.data);
    CHECK(wr::evaluate_loss(m, batch, targets, 0.5) == doctest::Approx(pre));
}

TEST_CASE("overfit one batch") {
    wr::WrModel m(kSmall);
    m.component_names = {"c0", "c1", "c2"};
    m.network.initialize(21);
    std::vector<ForecastWindow> ws;
    std::vector<wr::ComponentMatrix> cs;
    for (std::uint64_t s = 0; s < 4; ++s) {
        ws.push_back(testing::random_window(16, 4, 300 + s));
        cs.push_back(testing::components_for(ws.back(), 3, 400 + s));
    }
    std::vector<NetInput> batch;
    std::vector<const std::vector<double>*> targets;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        batch.push_back(wr::prepare_input(m, ws[i], cs[i]));
        targets.push_back(&ws[i].target);
    }
    Adam opt({1e-2});
    wr::TrainConfig tc;
    tc.learning_rate = 1e-2;
    const double first = wr::train_step(m, opt, batch, targets, tc);
    for (int i = 1; i < 200; ++i) wr::train_step(m, opt, batch, targets, tc);
    CHECK(opt.steps() == 200);
    CHECK(wr::evaluate_loss(m, batch, targets, 0.5) <= 0.5 * first);
}

TEST_CASE("training is bit-reproducible") {
    std::vector<ForecastWindow> ws;
    std::vector<wr::ComponentMatrix> cs;
    for (std::uint64_t s = 0; s < 10; ++s) {
        ws.push_back(testing::random_window(16, 4, 500 + s));
        cs.push_back(testing::components_for(ws.back(), 3, 600 + s));
    }
    wr::TrainConfig tc{5e-3, 4, 3, 77, 0.5};
    const auto a = wr::wr_train(ws, cs, 1.0, kSmall, tc);
    const auto b = wr::wr_train(ws, cs, 1.0, kSmall, tc);
    REQUIRE(a.epoch_loss.size() == 3);
    CHECK(a.epoch_loss == b.epoch_loss);
}

}
