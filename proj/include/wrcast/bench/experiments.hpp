#pragma once

#include "wrcast/bench/synth.hpp"
#include "wrcast/nn/network.hpp"
#include "wrcast/wr/combiner.hpp"
#include "wrcast/wr/report.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace wrcast {
class Config;
}

namespace wrcast::bench {

struct BenchConfig {
    std::size_t T = 28;
    std::size_t H = 7;
    std::size_t train_windows_per_series = 8;
    std::size_t test_windows_per_series = 4;  // consecutive H-blocks at the end of each series
    nn::NetConfig net{28, 7, 3, 16, {1, 2, 4}, 16};
    wr::TrainConfig train{3e-3, 32, 20, 0, 0.5};
    std::vector<double> alphas{0.0, 0.5, 1.0, 2.0, 3.0};
    double wr_alpha = 1.0;
    std::size_t seeds = 10;
    std::uint64_t seed = 0;
    SynthSpec synth{};
};

/// Reads T, H, alpha, alphas, learning_rate, batch_size, epochs, channels,
/// seeds, n_series, length, bias, sigma from a flat config over the defaults.
BenchConfig bench_config_from(const Config& cfg, BenchConfig base = {});

/// Windows with their stage-1 components; `test_truth` is filled only when the
/// true components are known.
struct ExperimentData {
    std::vector<ForecastWindow> train, test;
    std::vector<wr::ComponentMatrix> train_components, test_components, test_truth;
    std::uint64_t seed = 0;
    std::size_t clip_count = 0;
};

/// Generates the panel from mix_seed(cfg.seed, replicate), cuts train windows
/// before the test blocks and perturbs the true components.
ExperimentData build_synthetic_data(const BenchConfig& cfg, std::size_t replicate);
std::vector<ExperimentData> build_synthetic_replicates(const BenchConfig& cfg);

struct RunRecord {
    std::string model;
    double alpha = -1.0;  // -1 when the model has no alpha
    std::uint64_t seed = 0;
    double p50_ql = 0.0;
    double rmse = 0.0;
    double seconds = 0.0;
    bool failed = false;
    std::string error;
};

/// Median and best over seeds for one (model, alpha) cell.
struct CellSummary {
    std::string model;
    double alpha = -1.0;
    double weight_lo = 1.0, weight_hi = 1.0;  // reachable weight scope
    double median_p50_ql = 0.0, median_rmse = 0.0;
    double best_p50_ql = 0.0, best_rmse = 0.0;
    std::size_t runs = 0, failures = 0;
};

/// Mean |l_hat - l| against mean |w * l_hat - l| per component, pooled over
/// seeds; shares count only entries where l_hat differs from l.
struct ComponentBias {
    std::string model;
    std::string component;
    double mean_abs_estimate_error = 0.0;
    double mean_abs_modified_error = 0.0;
    double share_improved = 0.0;
    std::size_t count = 0;
};

struct ExperimentResult {
    std::string name;
    std::vector<RunRecord> runs;
    std::vector<CellSummary> cells;
    std::vector<ComponentBias> bias;
    std::vector<std::uint64_t> seeds;
    std::optional<double> argmin_alpha;      // sweep only
    double alpha0_weighted_deviation = 0.0;  // sweep only: max |sum w l_hat - sum l_hat| at alpha 0
    std::optional<wr::WeightReport> weights;  // W-R test outputs pooled over seeds
    double seconds = 0.0;

    const CellSummary* cell(const std::string& model, double alpha = -1.0) const;
    /// Share of improved entries pooled over every component of a model.
    double improved_share(const std::string& model) const;
};

/// Trains W-R per (alpha, replicate). Failures are recorded and skipped.
ExperimentResult run_alpha_sweep(std::span<const ExperimentData> data, const BenchConfig& cfg);

/// W-R (cfg.wr_alpha), additive, MLP combiner and the plain network.
ExperimentResult run_model_comparison(std::span<const ExperimentData> data, const BenchConfig& cfg);

void write_runs_csv(const ExperimentResult& r, std::ostream& out);
/// Table-style rows: model,alpha,scope,median/best P50_QL and RMSE.
void write_cells_csv(const ExperimentResult& r, std::ostream& out);
void write_bias_csv(const ExperimentResult& r, std::ostream& out);
void write_manifest_json(const ExperimentResult& r, const BenchConfig& cfg, std::ostream& out);

}  // namespace wrcast::bench
