#include "wrcast/bench/stage1.hpp"

#include "wrcast/bench/synth.hpp"
#include "wrcast/core/errors.hpp"
#include "wrcast/core/log.hpp"
#include "wrcast/fforma/spikes.hpp"

#include <json.hpp>

#include <cmath>
#include <set>
#include <sstream>

namespace wrcast::bench {

using nlohmann::json;

double Stage1Model::theta_for(const std::string& promo_type) const {
    const std::string key = promo_type.empty() ? "none" : promo_type;
    for (std::size_t i = 0; i < categories.size(); ++i)
        if (categories[i] == key) return theta[i];
    return pooled_theta;
}

void Stage1Model::save_json(std::ostream& out) const {
    std::ostringstream learner;
    baseline.save_json(learner);
    json j;
    j["format"] = "wrcast-stage1";
    j["version"] = 1;
    j["classical"] = {{"ma_window", config.classical.ma_window},
                      {"wma_window", config.classical.wma_window},
                      {"season", config.classical.season}};
    j["baseline"] = json::parse(learner.str());
    j["categories"] = categories;
    j["theta"] = theta;
    j["pooled_theta"] = pooled_theta;
    j["festival_beta"] = festival.beta;
    j["festival_count"] = festival.source_count;
    out << j.dump(1) << '\n';
}

Stage1Model Stage1Model::load_json(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(std::string("stage-1 model: ") + e.what());
    }
    if (j.value("format", "") != "wrcast-stage1") throw DataError("not a stage-1 model file");
    Stage1Model m;
    try {
        m.config.classical.ma_window = j["classical"]["ma_window"].get<std::size_t>();
        m.config.classical.wma_window = j["classical"]["wma_window"].get<std::size_t>();
        m.config.classical.season = j["classical"]["season"].get<std::size_t>();
        std::istringstream learner(j["baseline"].dump());
        m.baseline = fforma::MetaLearner::load_json(learner);
        m.categories = j["categories"].get<std::vector<std::string>>();
        m.theta = j["theta"].get<std::vector<double>>();
        m.pooled_theta = j["pooled_theta"].get<double>();
        m.festival.beta = j["festival_beta"].get<std::map<std::string, double>>();
        m.festival.source_count = j["festival_count"].get<std::map<std::string, std::size_t>>();
    } catch (const json::exception& e) {
        throw DataError(std::string("stage-1 model: ") + e.what());
    }
    if (m.theta.size() != m.categories.size()) throw DataError("stage-1 model: theta/category size mismatch");
    return m;
}

namespace {

std::vector<double> despiked(const ForecastWindow& w) {
    try {
        return fforma::remove_promo_spikes(w.history, w.history_covariates);
    } catch (const DomainError&) {
        return w.history;
    }
}

}  // namespace

std::vector<double> stage1_baseline(const Stage1Model& model, const ForecastWindow& window) {
    const auto methods = classical::default_registry(model.config.classical);
    auto b = fforma_predict(model.baseline, methods, despiked(window), window.horizon());
    for (auto& v : b) v = std::max(v, 0.0);
    return b;
}

Stage1Model stage1_fit(const PanelDataset& panel, std::span<const ForecastWindow> windows, const Stage1Config& cfg) {
    if (windows.empty()) throw DataError("stage 1 needs training windows");
    Stage1Model m;
    m.config = cfg;
    const auto methods = classical::default_registry(cfg.classical);

    std::vector<std::vector<double>> histories;
    histories.reserve(windows.size());
    for (const auto& w : windows) histories.push_back(despiked(w));
    m.baseline = fforma::fforma_train(histories, methods, cfg.fforma);

    if (panel.has_price && !panel.promo_types().empty()) {
        const auto data = causal::dml_data_from_panel(panel);
        const auto em = causal::dml_fit(data, cfg.dml);
        m.categories = em.categories;
        m.theta = em.theta;
        m.pooled_theta = em.pooled_theta;
    } else {
        warn("no price or promotion columns; promotion component is zero");
    }

    std::vector<causal::FestivalObservation> obs;
    std::set<std::string> levels;
    for (const auto& w : windows) {
        bool any = false;
        for (const auto& c : w.future_covariates) any = any || c.on_festival();
        if (!any || w.target.size() != w.horizon()) continue;
        const auto b = stage1_baseline(m, w);
        for (std::size_t j = 0; j < w.horizon(); ++j) {
            const auto& c = w.future_covariates[j];
            if (!c.on_festival()) continue;
            levels.insert(c.festival_level);
            if (b[j] <= 0.0 || c.on_promotion()) continue;
            obs.push_back({c.festival_level, w.target[j], b[j]});
        }
    }
    const std::vector<std::string> lv(levels.begin(), levels.end());
    m.festival = causal::festival_factor_fit(obs, lv);
    return m;
}

wr::ComponentMatrix stage1_components(const Stage1Model& model, const ForecastWindow& window) {
    const auto H = window.horizon();
    auto base = stage1_baseline(model, window);
    std::vector<double> promo(H, 0.0), fest(H, 0.0);
    for (std::size_t j = 0; j < H; ++j) {
        const auto& c = window.future_covariates[j];
        if (c.on_promotion() && c.price > 0.0 && c.reference_price > 0.0)
            promo[j] = causal::promotion_uplift(base[j], c.price, c.reference_price, model.theta_for(c.promo_type));
        if (c.on_festival()) fest[j] = model.festival.beta_for(c.festival_level) * base[j];
    }
    wr::ComponentMatrix out;
    out.names = kComponentNames;
    out.values = {std::move(base), std::move(promo), std::move(fest)};
    return out;
}

}  // namespace wrcast::bench
