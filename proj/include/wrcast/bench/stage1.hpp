#pragma once

#include "wrcast/causal/dml.hpp"
#include "wrcast/causal/festival.hpp"
#include "wrcast/classical/registry.hpp"
#include "wrcast/core/windows.hpp"
#include "wrcast/fforma/fforma.hpp"
#include "wrcast/wr/combiner.hpp"

#include <istream>
#include <ostream>
#include <span>
#include <vector>

namespace wrcast::bench {

/// Preliminary decomposition: FFORMA baseline on de-spiked history, DML
/// price elasticity for promotions, festival factor on the baseline.
struct Stage1Config {
    classical::ClassicalConfig classical{};
    fforma::FformaParams fforma{};
    causal::DmlParams dml{};
};

struct Stage1Model {
    Stage1Config config;
    fforma::MetaLearner baseline;
    // Only the final-stage values are kept; nuisance models are dropped.
    std::vector<std::string> categories;
    std::vector<double> theta;
    double pooled_theta = 0.0;
    causal::FestivalFactor festival;

    double theta_for(const std::string& promo_type) const;
    void save_json(std::ostream& out) const;
    static Stage1Model load_json(std::istream& in);
};

/// Fits all three estimators. `windows` supply the FFORMA training histories
/// and the festival observations (their future blocks must carry targets).
Stage1Model stage1_fit(const PanelDataset& panel, std::span<const ForecastWindow> windows, const Stage1Config& cfg);

/// Baseline forecast of the window's future block.
std::vector<double> stage1_baseline(const Stage1Model& model, const ForecastWindow& window);

/// Components (baseline, promotion, festival) for the window's future block.
wr::ComponentMatrix stage1_components(const Stage1Model& model, const ForecastWindow& window);

}  // namespace wrcast::bench
