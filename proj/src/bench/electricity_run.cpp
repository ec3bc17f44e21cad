#include "wrcast/bench/electricity_run.hpp"

#include "wrcast/core/errors.hpp"
#include "wrcast/core/log.hpp"
#include "wrcast/core/random.hpp"
#include "wrcast/stl/stl.hpp"

#include <algorithm>

namespace wrcast::bench {

wr::ComponentMatrix stl_components(const ForecastWindow& w, std::size_t period) {
    stl::StlConfig sc;
    sc.period = period;
    sc.outer_iterations = 1;
    const auto fit = stl::stl_decompose(w.history, sc);
    auto proj = stl::stl_project(fit, period, w.horizon());
    wr::ComponentMatrix c;
    c.names = {"trend", "seasonal"};
    c.values = {std::move(proj.trend), std::move(proj.seasonal)};
    return c;
}

namespace {

std::optional<std::size_t> index_of(const TimeSeries& s, Date d) {
    if (s.dates.empty() || d < s.dates.front()) return std::nullopt;
    const auto k = static_cast<std::size_t>((d - s.dates.front()).count());
    if (k >= s.size()) return std::nullopt;
    return k;
}

}  // namespace

ExperimentData electricity_data(const PanelDataset& daily, const ElectricityConfig& cfg, std::uint64_t seed) {
    if (cfg.anchors.empty()) throw ConfigError("no forecast anchors");
    const auto T = cfg.bench.T, H = cfg.bench.H;
    const auto first = *std::min_element(cfg.anchors.begin(), cfg.anchors.end());
    const auto last = *std::max_element(cfg.anchors.begin(), cfg.anchors.end());

    PanelDataset sub;
    for (const auto& s : daily.series) {
        if (sub.series.size() == cfg.clients) break;
        const auto end = index_of(s.observed, last);
        if (!end || *end + H > s.observed.size() || *end < 365) continue;
        const bool active = std::all_of(s.observed.values.begin() + static_cast<std::ptrdiff_t>(*end - 365),
                                        s.observed.values.begin() + static_cast<std::ptrdiff_t>(*end + H),
                                        [](double v) { return v > 0.0; });
        if (active) sub.series.push_back(s);
    }
    if (sub.series.size() < cfg.clients)
        warn("only " + std::to_string(sub.series.size()) + " active clients available");
    if (sub.series.empty()) throw DataError("no client is active over the evaluation period");

    ExperimentData d;
    d.seed = seed;
    PanelDataset head = sub;
    for (auto& s : head.series) {
        const auto cut = index_of(s.observed, first).value();
        // Training history starts after the leading zeros of the client.
        s.observed.dates.resize(cut);
        s.observed.values.resize(cut);
        s.covariates.resize(cut);
        const auto lead = static_cast<std::size_t>(
            std::find_if(s.observed.values.begin(), s.observed.values.end(), [](double v) { return v > 0.0; }) -
            s.observed.values.begin());
        s.observed.dates.erase(s.observed.dates.begin(), s.observed.dates.begin() + static_cast<std::ptrdiff_t>(lead));
        s.observed.values.erase(s.observed.values.begin(), s.observed.values.begin() + static_cast<std::ptrdiff_t>(lead));
        s.covariates.erase(s.covariates.begin(), s.covariates.begin() + static_cast<std::ptrdiff_t>(lead));
    }
    d.train = make_windows(head, T, H, cfg.train_windows_per_series, mix_seed(seed, 1));
    for (std::size_t s = 0; s < sub.series.size(); ++s)
        for (const auto a : cfg.anchors) d.test.push_back(window_at(sub, s, index_of(sub.series[s].observed, a).value(), T, H));
    for (const auto& w : d.train) d.train_components.push_back(stl_components(w, cfg.period));
    for (const auto& w : d.test) d.test_components.push_back(stl_components(w, cfg.period));
    return d;
}

ElectricityResult run_public_electricity(const ElectricityConfig& cfg) {
    if (!std::filesystem::exists(cfg.data_path))
        throw DataError("electricity data not found at '" + cfg.data_path.string() +
                        "'; download LD2011_2014.txt from " + kElectricityUrl);
    ElectricityOptions opts;
    opts.max_clients = std::max<std::size_t>(cfg.clients * 4, cfg.clients);
    const auto daily = load_electricity_wide(cfg.data_path, opts);
    const auto base = electricity_data(daily, cfg, cfg.bench.seed);
    std::vector<ExperimentData> reps;
    for (std::size_t r = 0; r < std::max<std::size_t>(cfg.bench.seeds, 1); ++r) {
        reps.push_back(base);
        reps.back().seed = mix_seed(cfg.bench.seed, r);
    }
    BenchConfig bc = cfg.bench;
    bc.net.T = bc.T;
    bc.net.H = bc.H;
    ElectricityResult out;
    out.comparison = run_model_comparison(reps, bc);
    out.comparison.name = "electricity_comparison";
    out.sweep = run_alpha_sweep(reps, bc);
    out.sweep.name = "electricity_alpha_sweep";
    return out;
}

}  // namespace wrcast::bench
