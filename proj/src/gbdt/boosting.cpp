#include "wrcast/gbdt/boosting.hpp"

#include "wrcast/core/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <numeric>
#include <string>

namespace wrcast::gbdt {

using nlohmann::json;

std::vector<double> GbdtModel::predict(std::span<const double> x) const {
    if (x.size() != n_features)
        throw DomainError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                          std::to_string(n_features));
    std::vector<double> out = base;
    for (const auto& round : rounds)
        for (std::size_t k = 0; k < round.trees.size(); ++k)
            out[k] += round.step * learning_rate * round.trees[k].predict(x);
    return out;
}

double GbdtModel::predict_scalar(std::span<const double> x) const {
    if (outputs() != 1) throw DomainError("predict_scalar on a multi-output model");
    return predict(x)[0];
}

namespace {

json tree_to_json(const RegressionTree& t) {
    json j;
    j["max_depth"] = t.max_depth();
    std::vector<int> feature, left, right;
    std::vector<double> threshold, value;
    for (const auto& n : t.nodes()) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
    }
    j["feature"] = feature;
    j["threshold"] = threshold;
    j["left"] = left;
    j["right"] = right;
    j["value"] = value;
    return j;
}

RegressionTree tree_from_json(const json& j) {
    const auto feature = j.at("feature").get<std::vector<int>>();
    const auto threshold = j.at("threshold").get<std::vector<double>>();
    const auto left = j.at("left").get<std::vector<int>>();
    const auto right = j.at("right").get<std::vector<int>>();
    const auto value = j.at("value").get<std::vector<double>>();
    const auto n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n)
        throw DataError("tree arrays have inconsistent lengths");
    std::vector<TreeNode> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = {feature[i], threshold[i], left[i], right[i], value[i]};
    return RegressionTree(std::move(nodes), j.at("max_depth").get<int>());
}

double squared_loss(std::span<const double> y, std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - f[i]) * (y[i] - f[i]);
    return s / static_cast<double>(y.size());
}

void check_params(const Matrix& X, const GbdtParams& params) {
    if (X.rows == 0) throw DomainError("cannot boost on empty data");
    if (!(params.learning_rate > 0.0) || !std::isfinite(params.learning_rate))
        throw DomainError("learning rate must be positive");
}

}  // namespace

void GbdtModel::save_json(std::ostream& out) const {
    json j;
    j["format"] = "wrcast-gbdt";
    j["version"] = 1;
    j["objective"] = objective;
    j["base"] = base;
    j["learning_rate"] = learning_rate;
    j["n_features"] = n_features;
    j["loss_history"] = loss_history;
    json rs = json::array();
    for (const auto& r : rounds) {
        json jr;
        jr["step"] = r.step;
        jr["trees"] = json::array();
        for (const auto& t : r.trees) jr["trees"].push_back(tree_to_json(t));
        rs.push_back(std::move(jr));
    }
    j["rounds"] = std::move(rs);
    out << j.dump() << '\n';
}

GbdtModel GbdtModel::load_json(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid model document: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "wrcast-gbdt") throw DataError("not a boosted-tree model document");
        if (j.at("version").get<int>() != 1) throw DataError("unsupported boosted-tree model version");
        GbdtModel m;
        m.objective = j.at("objective").get<std::string>();
        m.base = j.at("base").get<std::vector<double>>();
        m.learning_rate = j.at("learning_rate").get<double>();
        m.n_features = j.at("n_features").get<std::size_t>();
        m.loss_history = j.value("loss_history", std::vector<double>{});
        for (const auto& jr : j.at("rounds")) {
            BoostRound r;
            r.step = jr.at("step").get<double>();
            for (const auto& jt : jr.at("trees")) r.trees.push_back(tree_from_json(jt));
            if (r.trees.size() != m.base.size()) throw DataError("round tree count does not match outputs");
            m.rounds.push_back(std::move(r));
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model document: ") + e.what());
    }
}

GbdtModel gbdt_fit(const Matrix& X, std::span<const double> y, const GbdtParams& params) {
    check_params(X, params);
    if (y.size() != X.rows) throw DomainError("target length does not match feature rows");
    for (double v : y)
        if (!std::isfinite(v)) throw DomainError("targets must be finite");

    const auto n = X.rows;
    const auto sorted = sort_columns(X);
    GbdtModel m;
    m.objective = "squared";
    m.learning_rate = params.learning_rate;
    m.n_features = X.cols;
    m.base = {std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n)};

    std::vector<double> F(n, m.base[0]), resid(n), h(n);
    m.loss_history.push_back(squared_loss(y, F));
    for (std::size_t round = 0; round < params.n_trees; ++round) {
        for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - F[i];
        auto tree = fit_tree(X, resid, {}, params.tree, sorted);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            h[i] = tree.predict(X.row(i));
            num += resid[i] * h[i];
            den += h[i] * h[i];
        }
        // Exact minimiser of sum (r - rho * h)^2; the learning rate shrinks it further.
        double rho = den > 0.0 ? num / den : 0.0;
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = F[i] + rho * params.learning_rate * h[i];
        double loss = squared_loss(y, next);
        if (loss > m.loss_history.back()) {
            rho = 0.0;
            loss = m.loss_history.back();
        } else {
            F = std::move(next);
        }
        m.rounds.push_back({rho, {std::move(tree)}});
        m.loss_history.push_back(loss);
    }
    return m;
}

GbdtModel gbdt_fit_custom(const Matrix& X, const CustomObjective& objective, std::span<const double> base,
                          const GbdtParams& params) {
    check_params(X, params);
    const auto K = objective.outputs;
    if (K == 0 || !objective.evaluate) throw DomainError("custom objective is incomplete");
    if (base.size() != K) throw DomainError("base score count does not match objective outputs");

    const auto n = X.rows;
    const auto sorted = sort_columns(X);
    GbdtModel m;
    m.objective = "custom";
    m.learning_rate = params.learning_rate;
    m.n_features = X.cols;
    m.base.assign(base.begin(), base.end());

    Matrix F(n, K), G(n, K), H(n, K), D(n, K), trial(n, K);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < K; ++k) F(i, k) = base[k];

    double current = objective.evaluate(F, nullptr, nullptr);
    m.loss_history.push_back(current);
    std::vector<double> t(n), h(n);
    for (std::size_t round = 0; round < params.n_trees; ++round) {
        objective.evaluate(F, &G, &H);
        for (std::size_t i = 0; i < n * K; ++i)
            if (!std::isfinite(G.data[i]) || !std::isfinite(H.data[i]) || H.data[i] <= 0.0)
                throw TrainingError("non-finite or nonpositive gradient statistics at boosting round " +
                                    std::to_string(round + 1));

        BoostRound r;
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                t[i] = -G(i, k);
                h[i] = H(i, k);
            }
            r.trees.push_back(fit_tree(X, t, h, params.tree, sorted));
            for (std::size_t i = 0; i < n; ++i) D(i, k) = params.learning_rate * r.trees.back().predict(X.row(i));
        }

        double step = 1.0, value = current;
        bool accepted = false;
        for (int attempt = 0; attempt < 30; ++attempt, step *= 0.5) {
            for (std::size_t i = 0; i < n * K; ++i) trial.data[i] = F.data[i] + step * D.data[i];
            value = objective.evaluate(trial, nullptr, nullptr);
            if (std::isfinite(value) && value <= current) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            step = 0.0;
            value = current;
        } else {
            F.data = trial.data;
        }
        r.step = step;
        current = value;
        m.rounds.push_back(std::move(r));
        m.loss_history.push_back(current);
    }
    return m;
}

}  // namespace wrcast::gbdt
