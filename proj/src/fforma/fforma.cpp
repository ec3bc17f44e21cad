#include "wrcast/fforma/fforma.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/log.hpp"
#include "wrcast/core/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wrcast::fforma {

using gbdt::Matrix;

std::vector<double> softmax(std::span<const double> s) {
    if (s.empty()) return {};
    const double mx = *std::max_element(s.begin(), s.end());
    std::vector<double> w(s.size());
    double z = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) z += w[i] = std::exp(s[i] - mx);
    for (auto& v : w) v /= z;
    return w;
}

LossTable build_loss_table(std::span<const std::vector<double>> histories,
                           std::span<const classical::CandidateMethod> methods, const FformaParams& params) {
    const auto H = params.horizon;
    if (methods.empty()) throw DomainError("no candidate methods");
    if (H == 0) throw DomainError("validation horizon must be positive");

    LossTable t;
    for (const auto& m : methods) t.methods.push_back(m.name);
    std::vector<MetaFeatures> feats;
    std::vector<std::vector<double>> losses;
    std::size_t failures = 0;
    for (std::size_t w = 0; w < histories.size(); ++w) {
        const auto& h = histories[w];
        if (h.size() <= H) {
            warn("training window " + std::to_string(w) + " is shorter than the validation horizon; skipped");
            continue;
        }
        const std::span<const double> fit(h.data(), h.size() - H);
        const std::span<const double> valid(h.data() + fit.size(), H);
        std::vector<double> row;
        for (const auto& m : methods) {
            double loss = std::numeric_limits<double>::infinity();
            try {
                const auto f = m.forecast(fit, H);
                if (f.size() == H) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < H; ++j) s += quantile_loss(valid[j], f[j], params.quantile);
                    loss = s / static_cast<double>(H);
                }
            } catch (const Error&) {
            }
            if (!std::isfinite(loss)) ++failures;
            row.push_back(loss);
        }
        feats.push_back(meta_features(fit));
        losses.push_back(std::move(row));
    }
    if (failures > 0)
        warn(std::to_string(failures) + " method fits failed while building the loss table; penalised");

    const auto n = losses.size();
    t.features = Matrix(n, kMetaFeatureCount);
    t.losses = Matrix(n, methods.size());
    double worst = 0.0;
    for (const auto& row : losses)
        for (double v : row)
            if (std::isfinite(v)) worst = std::max(worst, v);
    const double penalty = params.penalty_factor * (worst > 0.0 ? worst : 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < kMetaFeatureCount; ++f) t.features(i, f) = feats[i][f];
        for (std::size_t m = 0; m < methods.size(); ++m)
            t.losses(i, m) = std::isfinite(losses[i][m]) ? losses[i][m] : penalty;
    }
    return t;
}

MetaLearner fforma_train_from_table(const LossTable& table, const FformaParams& params) {
    const auto n = table.losses.rows;
    const auto M = table.losses.cols;
    if (M != table.methods.size() || table.features.rows != n) throw DomainError("loss table shapes disagree");
    if (M < 1) throw DomainError("no candidate methods");
    if (n < params.min_windows)
        throw DataError("meta-learner needs at least " + std::to_string(params.min_windows) +
                        " training windows, got " + std::to_string(n));

    // Row-relative losses keep windows of different scale comparable.
    Matrix L(n, M);
    std::vector<double> range(n);
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t m = 0; m < M; ++m) {
            const double v = table.losses(i, m);
            if (!std::isfinite(v) || v < 0.0) throw DomainError("loss table entries must be finite and nonnegative");
            mean += v / static_cast<double>(M);
        }
        for (std::size_t m = 0; m < M; ++m) {
            L(i, m) = mean > 0.0 ? table.losses(i, m) / mean : 0.0;
            lo = std::min(lo, L(i, m));
            hi = std::max(hi, L(i, m));
        }
        range[i] = hi - lo;
    }

    gbdt::CustomObjective obj;
    obj.outputs = M;
    obj.evaluate = [&](const Matrix& S, Matrix* G, Matrix* Hs) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto w = softmax(S.row(i));
            double lbar = 0.0;
            for (std::size_t m = 0; m < M; ++m) lbar += w[m] * L(i, m);
            total += lbar;
            if (!G) continue;
            for (std::size_t m = 0; m < M; ++m) {
                (*G)(i, m) = w[m] * (L(i, m) - lbar) / static_cast<double>(n);
                (*Hs)(i, m) = (w[m] * (1.0 - w[m]) * range[i] + 1e-6) / static_cast<double>(n);
            }
        }
        return total / static_cast<double>(n);
    };
    const std::vector<double> base(M, 0.0);
    MetaLearner learner;
    learner.methods = table.methods;
    learner.scorer = gbdt::gbdt_fit_custom(table.features, obj, base, params.boosting);
    return learner;
}

MetaLearner fforma_train(std::span<const std::vector<double>> histories,
                         std::span<const classical::CandidateMethod> methods, const FformaParams& params) {
    return fforma_train_from_table(build_loss_table(histories, methods, params), params);
}

std::vector<double> MetaLearner::weights(const MetaFeatures& features) const {
    return softmax(scorer.predict(features));
}

void MetaLearner::save_json(std::ostream& out) const {
    std::ostringstream model;
    scorer.save_json(model);
    nlohmann::json j;
    j["format"] = "wrcast-fforma";
    j["version"] = 1;
    j["methods"] = methods;
    j["scorer"] = nlohmann::json::parse(model.str());
    out << j.dump() << '\n';
}

MetaLearner MetaLearner::load_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("format").get<std::string>() != "wrcast-fforma") throw DataError("not a meta-learner document");
        MetaLearner m;
        m.methods = j.at("methods").get<std::vector<std::string>>();
        std::istringstream scorer(j.at("scorer").dump());
        m.scorer = gbdt::GbdtModel::load_json(scorer);
        if (m.scorer.outputs() != m.methods.size()) throw DataError("scorer outputs do not match the method list");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed meta-learner document: ") + e.what());
    }
}

std::vector<double> fforma_predict(const MetaLearner& learner, std::span<const classical::CandidateMethod> methods,
                                   std::span<const double> history, std::size_t horizon) {
    if (methods.size() != learner.methods.size()) throw ConfigError("method registry does not match the learner");
    for (std::size_t m = 0; m < methods.size(); ++m)
        if (methods[m].name != learner.methods[m])
            throw ConfigError("method '" + methods[m].name + "' does not match learner method '" +
                              learner.methods[m] + "'");
    const auto w = learner.weights(meta_features(history));
    std::vector<double> out(horizon, 0.0);
    double kept = 0.0;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        std::vector<double> f;
        try {
            f = methods[m].forecast(history, horizon);
        } catch (const Error& e) {
            warn("method " + methods[m].name + " failed: " + e.what());
            continue;
        }
        if (f.size() != horizon || !std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); })) {
            warn("method " + methods[m].name + " produced an unusable forecast");
            continue;
        }
        for (std::size_t j = 0; j < horizon; ++j) out[j] += w[m] * f[j];
        kept += w[m];
    }
    if (kept <= 0.0) throw DomainError("every candidate method failed on this series");
    for (auto& v : out) v /= kept;
    return out;
}

}  // namespace wrcast::fforma
