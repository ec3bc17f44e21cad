#pragma once

#include "wrcast/core/panel.hpp"
#include "wrcast/gbdt/boosting.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wrcast::causal {

/// Residualisation inputs. X holds one indicator column per promotion
/// category (every row has exactly one 1); W holds the confounders.
struct DmlData {
    std::vector<double> Y;   // log1p(sales)
    std::vector<double> Tr;  // log(price)
    gbdt::Matrix X;
    gbdt::Matrix W;
    std::vector<std::string> categories;  // names of the X columns

    std::size_t rows() const noexcept { return Y.size(); }
};

/// Builds rows from every observed date with a positive price. Categories are
/// "none" followed by the panel's promotion types. W = (year, month, day,
/// weekday, log reference price, series mean of log1p sales on regular days).
DmlData dml_data_from_panel(const PanelDataset& panel);

struct DmlParams {
    gbdt::GbdtParams nuisance{100, 0.1, {3, 5}};
    std::uint64_t seed = 0;
    std::size_t min_rows = 100;
    std::size_t min_category_rows = 20;  // smaller categories use the pooled elasticity
};

struct ElasticityModel {
    std::vector<std::string> categories;
    std::vector<double> theta;          // per category
    std::vector<bool> pooled_fallback;  // true where theta was replaced by the pooled value
    double pooled_theta = 0.0;
    double intercept = 0.0;             // final-stage intercept
    // Cross-fitting bookkeeping: row i sits in fold[i]; its nuisance
    // predictions come from the models trained on fold predicted_by[i].
    std::vector<int> fold;
    std::vector<int> predicted_by;
    std::vector<double> y_residual;
    std::vector<double> t_residual;
    gbdt::GbdtModel outcome_models[2];
    gbdt::GbdtModel treatment_models[2];

    /// Elasticity for a promotion label; "" / "none" and unknown labels map to
    /// the "none" category and the pooled value respectively.
    double theta_for(const std::string& promo_type) const;
};

/// Double machine learning with 2-fold cross-fitting: boosted nuisance fits
/// Y ~ (X, W) and Tr ~ (X, W), residualisation, then OLS of the outcome
/// residual on [1, Tr-residual x category]. Throws DataError with fewer than
/// min_rows rows and IdentifiabilityError when the treatment does not vary.
ElasticityModel dml_fit(const DmlData& data, const DmlParams& params = {});

/// baseline * ((price / reference)^theta - 1).
double promotion_uplift(double baseline, double price, double reference_price, double theta);

/// Uplift on promotion dates of the plan, 0 elsewhere. Throws DomainError for
/// nonpositive prices on promotion dates.
std::vector<double> promotion_component(const ElasticityModel& model, std::span<const double> baseline,
                                        std::span<const CovariateRow> plan);

}  // namespace wrcast::causal
