#include "dlab/analysis/lyapunov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"
#include "dlab/hyperbolic/sampling.hpp"
#include "dlab/numerics.hpp"
#include "dlab/random.hpp"

namespace dlab::analysis {

using hyperbolic::GroupElement;
using hyperbolic::LieVector;

namespace {

// h Y h^{-1} in the {X1, X2, X3} coordinates.
LieVector adjoint(const GroupElement& h, const LieVector& y) {
    const double y11 = 0.5 * y[0], y12 = 0.5 * (y[1] + y[2]), y21 = 0.5 * (y[1] - y[2]);
    const GroupElement hi = h.inverse();
    // M = h Y
    const double m11 = h.a() * y11 + h.b() * y21, m12 = h.a() * y12 - h.b() * y11;
    const double m21 = h.c() * y11 + h.d() * y21, m22 = h.c() * y12 - h.d() * y11;
    const double r11 = m11 * hi.a() + m12 * hi.c();
    const double r12 = m11 * hi.b() + m12 * hi.d();
    const double r21 = m21 * hi.a() + m22 * hi.c();
    return {2.0 * r11, r12 + r21, r12 - r21};
}

double norm3(const LieVector& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

LyapunovEstimate summarize(LyapunovSystem system, double horizon, const std::vector<double>& gammas) {
    LyapunovEstimate e;
    e.system = system;
    e.horizon = horizon;
    e.samples = gammas.size();
    const auto me = mean_and_stderr(gammas);
    e.gamma = me.mean;
    e.stderr_ = me.stderr_;
    e.ci_lo = me.mean - 1.96 * me.stderr_;
    e.ci_hi = me.mean + 1.96 * me.stderr_;
    e.minimum = *std::min_element(gammas.begin(), gammas.end());
    return e;
}

}  // namespace

std::string to_string(LyapunovSystem s) { return s == LyapunovSystem::BolzaFlow ? "bolza-flow" : "torus-map"; }

LyapunovEstimate lyapunov_bolza(double T, std::size_t n_samples, std::uint64_t seed, double dt, double spin_up) {
    if (!(T >= 20.0)) throw ConfigError("T", "flow horizon must be at least 20");
    if (n_samples < 2) throw ConfigError("n_samples", "need at least two samples");
    if (!(dt > 0.0) || !(spin_up >= 0.0)) throw ConfigError("dt", "dt must be positive and spin-up nonnegative");
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    const auto warm = static_cast<std::size_t>(std::llround(spin_up / dt));
    const GroupElement back = hyperbolic::geodesic_flow(GroupElement{}, -dt);
    std::vector<double> gammas(n_samples);
    parallel_for(n_samples, default_workers(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            GroupElement g = hyperbolic::sample_uniform_one(seed, i);
            rng::Stream s(seed, rng::StreamTag::Lyapunov, i);
            LieVector v{s.normal(), s.normal(), s.normal()};
            double log_growth = 0.0;
            for (std::size_t k = 0; k < warm + steps; ++k) {
                g = hyperbolic::geodesic_flow(g, dt);
                if (k % 64 == 63) g = hyperbolic::reduce(g);
                v = adjoint(back, v);
                const double n = norm3(v);
                if (k >= warm) log_growth += std::log(n);
                for (auto& c : v) c /= n;
            }
            gammas[i] = log_growth / (static_cast<double>(steps) * dt);
        }
    });
    return summarize(LyapunovSystem::BolzaFlow, static_cast<double>(steps) * dt, gammas);
}

LyapunovEstimate lyapunov_map(const spectral::TorusMap& map, std::size_t steps, std::size_t n_samples,
                              std::uint64_t seed, std::size_t spin_up) {
    if (steps < 1000) throw ConfigError("steps", "map horizon must be at least 1000 steps");
    if (n_samples < 2) throw ConfigError("n_samples", "need at least two samples");
    std::vector<double> gammas(n_samples);
    parallel_for(n_samples, default_workers(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            rng::Stream s(seed, rng::StreamTag::Lyapunov, i);
            double x1 = s.uniform(), x2 = s.uniform();
            double v1 = s.normal(), v2 = s.normal();
            double log_growth = 0.0;
            for (std::size_t k = 0; k < spin_up + steps; ++k) {
                const auto j = map.jacobian(x1, x2);
                const double w1 = j[0] * v1 + j[1] * v2;
                const double w2 = j[2] * v1 + j[3] * v2;
                const auto y = map.apply(x1, x2);
                x1 = y[0];
                x2 = y[1];
                const double n = std::hypot(w1, w2);
                if (k >= spin_up) log_growth += std::log(n);
                v1 = w1 / n;
                v2 = w2 / n;
            }
            gammas[i] = log_growth / static_cast<double>(steps);
        }
    });
    return summarize(LyapunovSystem::TorusMap, static_cast<double>(steps), gammas);
}

}  // namespace dlab::analysis
