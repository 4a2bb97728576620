#pragma once

#include <cstdint>
#include <string>

#include "dlab/spectral/torus_map.hpp"

namespace dlab::analysis {

enum class LyapunovSystem { BolzaFlow, TorusMap };

std::string to_string(LyapunovSystem s);

/// Finite-time exponents (1/T) log |d phi^T v| for v tracked by power iteration of the
/// tangent map (renormalized every step), one per uniform initial condition.
struct LyapunovEstimate {
    LyapunovSystem system = LyapunovSystem::BolzaFlow;
    double gamma = 0.0;    // sample mean
    double stderr_ = 0.0;
    double ci_lo = 0.0;    // mean -/+ 1.96 stderr
    double ci_hi = 0.0;
    double minimum = 0.0;  // conservative surrogate for the infimum-type rate
    double horizon = 0.0;  // T (time units or map steps)
    std::size_t samples = 0;
};

/// Geodesic flow on the unit tangent bundle of the Bolza surface. The tangent map in the
/// left-invariant frame is Ad(a_{-dt}). Throws ConfigError unless T >= 20 and n_samples >= 2.
LyapunovEstimate lyapunov_bolza(double T, std::size_t n_samples, std::uint64_t seed, double dt = 0.1,
                                double spin_up = 5.0);

/// Torus map, tangent map DT along the orbit. Throws ConfigError unless steps >= 1000 and
/// n_samples >= 2.
LyapunovEstimate lyapunov_map(const spectral::TorusMap& map, std::size_t steps, std::size_t n_samples,
                              std::uint64_t seed, std::size_t spin_up = 50);

}  // namespace dlab::analysis
