#include "wrcast/bench/synth.hpp"

#include "wrcast/causal/dml.hpp"
#include "wrcast/core/errors.hpp"
#include "wrcast/core/random.hpp"

#include <cmath>
#include <numbers>

namespace wrcast::bench {

namespace {

void check(const SynthSpec& s) {
    if (s.n_series == 0 || s.length == 0) throw ConfigError("synthetic panel needs series and days");
    if (s.baseline_sigma < 0.0 || s.noise_sigma < 0.0) throw ConfigError("noise levels must be nonnegative");
    if (!(s.discount_lo > 0.0 && s.discount_hi < 1.0 && s.discount_lo <= s.discount_hi))
        throw ConfigError("discounts must lie in (0, 1)");
    if (s.promo_frequency < 0.0 || s.promo_frequency > 1.0) throw ConfigError("promotion frequency must be in [0, 1]");
    for (double v : s.perturb.sigma)
        if (v < 0.0) throw ConfigError("perturbation noise must be nonnegative");
}

}  // namespace

SynthPanel generate_panel(const SynthSpec& spec) {
    check(spec);
    SynthPanel out;
    out.panel.has_price = true;
    out.panel.has_promo = true;
    out.panel.has_festival = !spec.festival_beta.empty();

    std::vector<std::string> levels;
    for (const auto& [name, beta] : spec.festival_beta) levels.push_back(name);

    for (std::size_t s = 0; s < spec.n_series; ++s) {
        Rng rng(mix_seed(spec.seed, s));
        const double level = spec.level * rng.uniform(1.0 - spec.level_spread, 1.0 + spec.level_spread);
        const double ref = rng.uniform(5.0, 20.0);
        SeriesData sd;
        sd.observed.series_id = "s" + std::to_string(s);
        std::vector<double> base(spec.length), promo(spec.length, 0.0), fest(spec.length, 0.0);
        double dev = 0.0;
        const double innov = spec.baseline_sigma * std::sqrt(1.0 - spec.phi * spec.phi);
        for (std::size_t t = 0; t < spec.length; ++t) {
            const Date d = spec.start + std::chrono::days(static_cast<long>(t));
            const double wd = calendar_fields(d).weekday;
            dev = spec.phi * dev + innov * rng.normal();
            base[t] = std::max(0.0, level * (1.0 + spec.weekly_amplitude * std::sin(2.0 * std::numbers::pi * wd / 7.0)) + dev);

            CovariateRow c;
            c.reference_price = ref;
            c.price = ref;
            if (rng.bernoulli(spec.promo_frequency)) {
                const double disc = rng.uniform(spec.discount_lo, spec.discount_hi);
                c.promo_type = "discount";
                c.price = ref * (1.0 - disc);
                promo[t] = causal::promotion_uplift(base[t], c.price, ref, spec.theta);
            } else {
                c.promo_type = "none";
            }
            c.festival_level = "none";
            if (!levels.empty() && spec.festival_period > 0) {
                const std::size_t slot = spec.festival_period / levels.size();
                const std::size_t pos = (t + s) % spec.festival_period;
                if (slot > 0 && pos % slot == slot / 2) {
                    const auto& lv = levels[pos / slot];
                    c.festival_level = lv;
                    fest[t] = spec.festival_beta.at(lv) * base[t];
                }
            }
            double y = base[t] + promo[t] + fest[t] + spec.noise_sigma * rng.normal();
            if (y < 0.0) {
                y = 0.0;
                ++out.clip_count;
            }
            sd.observed.dates.push_back(d);
            sd.observed.values.push_back(y);
            sd.covariates.push_back(std::move(c));
        }
        out.panel.series.push_back(std::move(sd));
        out.baseline.push_back(std::move(base));
        out.promotion.push_back(std::move(promo));
        out.festival.push_back(std::move(fest));
    }
    return out;
}

wr::ComponentMatrix true_components(const SynthPanel& synth, const ForecastWindow& w) {
    const auto s = w.series_index;
    const auto H = w.horizon();
    if (s >= synth.baseline.size() || w.anchor + H > synth.baseline[s].size())
        throw DomainError("window lies outside the synthetic panel");
    wr::ComponentMatrix c;
    c.names = kComponentNames;
    const std::vector<double>* src[3] = {&synth.baseline[s], &synth.promotion[s], &synth.festival[s]};
    for (const auto* v : src)
        c.values.emplace_back(v->begin() + static_cast<std::ptrdiff_t>(w.anchor),
                              v->begin() + static_cast<std::ptrdiff_t>(w.anchor + H));
    return c;
}

wr::ComponentMatrix perturb_components(const wr::ComponentMatrix& truth, const PerturbSpec& spec, std::uint64_t seed) {
    const auto N = truth.count();
    if (spec.bias.size() != N || spec.sigma.size() != N)
        throw ConfigError("perturbation spec has " + std::to_string(spec.bias.size()) + " entries for " +
                          std::to_string(N) + " components");
    Rng rng(seed);
    wr::ComponentMatrix out = truth;
    for (std::size_t i = 0; i < N; ++i)
        for (auto& v : out.values[i]) {
            const double z = rng.normal();
            v *= spec.bias[i] * (spec.sigma[i] > 0.0 ? std::exp(spec.sigma[i] * z) : 1.0);
        }
    return out;
}

}  // namespace wrcast::bench
