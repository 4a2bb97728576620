#include "dlab/stochastic/flow.hpp"

#include <cmath>
#include <limits>

#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"
#include "dlab/hyperbolic/sampling.hpp"
#include "dlab/numerics.hpp"
#include "dlab/random.hpp"

namespace dlab::stochastic {

namespace {

constexpr std::uint64_t kMaxSteps = 1ULL << 32;

std::uint64_t step_count(double segment, double dt) {
    const double n = std::ceil(segment / dt - 1e-9);
    if (!std::isfinite(n) || n > static_cast<double>(kMaxSteps)) {
        throw ConfigError("dt", "step count overflow: segment too long for the time step");
    }
    return static_cast<std::uint64_t>(std::max(1.0, n));
}

// Advances one path by `steps` steps of size dt, drawing noise blocks from `first_step` on.
GroupElement advance(GroupElement g, const DiffusionConfig& step_cfg, std::uint64_t steps, rng::Stream* stream,
                     std::uint64_t first_step) {
    if (step_cfg.nu == 0.0) {
        for (std::uint64_t s = 0; s < steps; ++s) g = geodesic_flow(g, -step_cfg.dt);
        return g;
    }
    for (std::uint64_t s = 0; s < steps; ++s) g = sde_step(g, step_cfg, stream->step_noise(first_step + s));
    return g;
}

void check_times(std::span<const double> times) {
    if (times.empty()) throw ConfigError("times", "at least one time is required");
    if (!(times[0] >= 0.0)) throw ConfigError("times", "times must be non-negative");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ConfigError("times", "times must strictly increase");
    }
}

}  // namespace

GroupElement sde_step(const GroupElement& g, const DiffusionConfig& cfg, const std::array<double, 3>& noise) noexcept {
    if (cfg.nu == 0.0) return geodesic_flow(g, -cfg.dt);
    const double amp = std::sqrt(2.0 * cfg.nu * cfg.dt);
    return g * hyperbolic::exp_algebra({-cfg.dt + amp * noise[0], amp * noise[1], amp * noise[2]});
}

ParticleEnsemble neighbourhood_ensemble(const GroupElement& center, double delta, std::size_t n,
                                       std::uint64_t seed, const DiffusionConfig& cfg) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta", "neighbourhood radius must be positive");
    if (n == 0) throw ConfigError("particles", "ensemble needs at least one particle");
    cfg.validate();
    ParticleEnsemble ens;
    ens.config = cfg;
    ens.seed = seed;
    ens.provenance = "neighbourhood";
    ens.states.resize(n);
    parallel_for(n, default_workers(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            rng::Stream s(seed, rng::StreamTag::Neighbourhood, i);
            hyperbolic::LieVector y{s.normal(), s.normal(), s.normal()};
            const double scale = delta * std::cbrt(s.uniform()) / hyperbolic::lie_norm(y);
            for (auto& c : y) c *= scale;
            ens.states[i] = center * hyperbolic::exp_algebra(y);
        }
    });
    return ens;
}

ParticleEnsemble evolve_ensemble(ParticleEnsemble ens, double t_target) {
    ens.config.validate();
    if (!std::isfinite(t_target) || t_target < ens.time) {
        throw ConfigError("t_target", "target time must be finite and not before the ensemble time");
    }
    const double segment = t_target - ens.time;
    if (segment == 0.0) return ens;
    const std::uint64_t steps = step_count(segment, ens.config.dt);
    DiffusionConfig step_cfg = ens.config;
    step_cfg.dt = segment / static_cast<double>(steps);
    const std::uint64_t first = ens.steps;
    if (first > kMaxSteps) throw ConfigError("dt", "step count overflow");
    parallel_for(ens.states.size(), default_workers(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            rng::Stream stream(ens.seed, rng::StreamTag::Diffusion, i);
            ens.states[i] = advance(ens.states[i], step_cfg, steps, &stream, first);
        }
    });
    ens.steps += steps;
    ens.time = t_target;
    return ens;
}

PointEstimate pointwise_solution(const ObservableCombination& u0, const GroupElement& x, double t,
                                 const DiffusionConfig& cfg, std::size_t n_paths, std::uint64_t seed) {
    if (n_paths < 2) throw ConfigError("n_paths", "need at least two paths");
    if (!(t >= 0.0)) throw ConfigError("t", "time must be non-negative");
    ParticleEnsemble ens;
    ens.states.assign(n_paths, x);
    ens.config = cfg;
    ens.seed = seed;
    ens = evolve_ensemble(std::move(ens), t);
    std::vector<double> vals(n_paths);
    parallel_for(n_paths, default_workers(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) vals[i] = u0(ens.states[i]);
    });
    const auto me = mean_and_stderr(vals);
    return {me.mean, me.stderr_};
}

double bootstrap_stderr(std::span<const double> xs, std::uint64_t seed, std::uint64_t index, int resamples) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    rng::Stream stream(seed, rng::StreamTag::Bootstrap, index);
    std::vector<double> means(resamples), pick(n);
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            pick[i] = xs[std::min(n - 1, static_cast<std::size_t>(stream.uniform() * static_cast<double>(n)))];
        }
        means[b] = pairwise_sum(pick) / static_cast<double>(n);
    }
    const double m = pairwise_sum(means) / resamples;
    double ss = 0.0;
    for (double v : means) ss += (v - m) * (v - m);
    return std::sqrt(ss / (resamples - 1));
}

DecayCurve l2_decay_curve(const ObservableCombination& u0, std::span<const double> times, const DiffusionConfig& cfg,
                          std::size_t n_base, std::size_t n_paths, std::uint64_t seed) {
    check_times(times);
    cfg.validate();
    if (n_base < 2) throw ConfigError("n_base", "need at least two base points");
    if (n_paths < 2) throw ConfigError("n_paths", "need at least two paths per base point");
    DecayCurve curve;
    curve.times.assign(times.begin(), times.end());
    curve.power = 2;
    curve.label = "l2-squared";
    const std::size_t nt = times.size();
    if (u0.is_constant()) {
        curve.values.assign(nt, 0.0);
        curve.stderrs.assign(nt, 0.0);
        return curve;
    }
    const double mean = u0.mean();

    // Every time point gets its own base points and paths, so the errors of different
    // points are independent.
    std::vector<std::vector<double>> pair(nt, std::vector<double>(n_base));
    for (std::size_t k = 0; k < nt; ++k) {
        const std::uint64_t steps = times[k] > 0.0 ? step_count(times[k], cfg.dt) : 0;
        DiffusionConfig step_cfg = cfg;
        if (steps) step_cfg.dt = times[k] / static_cast<double>(steps);
        parallel_for(n_base, default_workers(), [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) {
                const std::uint64_t base = k * n_base + j;
                const GroupElement x = hyperbolic::sample_uniform_one(seed, base);
                double sum = 0.0, sum_sq = 0.0;
                for (std::size_t i = 0; i < n_paths; ++i) {
                    rng::Stream stream(seed, rng::StreamTag::Diffusion, base * n_paths + i);
                    const double v = u0(advance(x, step_cfg, steps, &stream, 0)) - mean;
                    sum += v;
                    sum_sq += v * v;
                }
                pair[k][j] = (sum * sum - sum_sq) / static_cast<double>(n_paths * (n_paths - 1));
            }
        });
    }
    curve.values.resize(nt);
    curve.stderrs.resize(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        curve.values[k] = pairwise_sum(pair[k]) / static_cast<double>(n_base);
        curve.stderrs[k] = bootstrap_stderr(pair[k], seed, k);
    }
    return curve;
}

DecayCurve correlation_curve(const ObservableCombination& f, const ObservableCombination& g,
                             std::span<const double> times, std::size_t n_samples, std::uint64_t seed) {
    check_times(times);
    if (n_samples < 2) throw ConfigError("n_samples", "need at least two samples");
    const std::size_t nt = times.size();
    const auto ens = hyperbolic::sample_uniform(n_samples, seed);
    std::vector<double> fv(n_samples), g0(n_samples);
    std::vector<std::vector<double>> gt(nt, std::vector<double>(n_samples));
    parallel_for(n_samples, default_workers(), [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) {
            const auto& x = ens.states[j];
            fv[j] = f.evaluate_reduced(x);
            g0[j] = g.evaluate_reduced(x);
            for (std::size_t k = 0; k < nt; ++k) gt[k][j] = g(geodesic_flow(x, times[k]));
        }
    });
    const double n = static_cast<double>(n_samples);
    const double fbar = pairwise_sum(fv) / n;
    const double gbar = pairwise_sum(g0) / n;
    DecayCurve curve;
    curve.times.assign(times.begin(), times.end());
    curve.power = 1;
    curve.label = "correlation";
    std::vector<double> prod(n_samples), centred(n_samples);
    for (std::size_t k = 0; k < nt; ++k) {
        for (std::size_t j = 0; j < n_samples; ++j) {
            prod[j] = fv[j] * gt[k][j];
            centred[j] = (fv[j] - fbar) * (gt[k][j] - gbar);
        }
        curve.values.push_back(pairwise_sum(prod) / n - fbar * gbar);
        curve.stderrs.push_back(mean_and_stderr(centred).stderr_);
    }
    return curve;
}

}  // namespace dlab::stochastic
