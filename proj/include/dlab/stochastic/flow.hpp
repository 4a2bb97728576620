#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "dlab/decay_curve.hpp"
#include "dlab/ensemble.hpp"
#include "dlab/hyperbolic/group_element.hpp"
#include "dlab/hyperbolic/observable.hpp"

namespace dlab::stochastic {

using hyperbolic::GroupElement;
using hyperbolic::ObservableCombination;

/// One step of the backward stochastic characteristic of d_t u + X u = nu Delta u:
///   g * exp(-dt X1 + sqrt(2 nu dt) (xi1 X1 + xi2 X2 + xi3 X3)).
/// Delta = X1^2 + X2^2 + X3^2 is the Laplace-Beltrami operator of the left-invariant metric
/// (the group is unimodular), so E f(step) = f - dt (X f - nu Delta f) + O(dt^2).
/// With nu == 0 this is geodesic_flow(g, -dt) exactly.
GroupElement sde_step(const GroupElement& g, const DiffusionConfig& cfg, const std::array<double, 3>& noise) noexcept;

/// n particles center * exp(Y) with Y uniform in the ball |Y| <= delta of the Lie algebra.
/// Throws ConfigError for delta <= 0 or n == 0.
ParticleEnsemble neighbourhood_ensemble(const GroupElement& center, double delta, std::size_t n, std::uint64_t seed,
                                       const DiffusionConfig& cfg);

/// Advances every particle to t_target. The segment is cut into ceil(segment/dt) equal
/// steps; particle i takes the noise of (seed, i, global step). States are not reduced.
/// Throws ConfigError if t_target < time or the step count is absurd.
ParticleEnsemble evolve_ensemble(ParticleEnsemble ens, double t_target);

struct PointEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

/// u(t, x) = E u0(Y_t^x) over n_paths independent backward characteristics.
PointEstimate pointwise_solution(const ObservableCombination& u0, const GroupElement& x, double t,
                                 const DiffusionConfig& cfg, std::size_t n_paths, std::uint64_t seed);

/// Unbiased estimate of ||u(t) - mean||^2: for each uniform base point, n_paths independent
/// characteristics and the average over distinct pairs of (u0(Y) - mean)(u0(Y') - mean).
/// Standard errors by bootstrap over base points. Values are not clamped at zero.
DecayCurve l2_decay_curve(const ObservableCombination& u0, std::span<const double> times, const DiffusionConfig& cfg,
                          std::size_t n_base, std::size_t n_paths, std::uint64_t seed);

/// int f(rho) g(phi^t rho) dm - int f dm int g dm under the forward geodesic flow, with the
/// means taken from the same uniform sample.
DecayCurve correlation_curve(const ObservableCombination& f, const ObservableCombination& g,
                             std::span<const double> times, std::size_t n_samples, std::uint64_t seed);

// Bootstrap standard error of the mean with `resamples` deterministic resamples.
double bootstrap_stderr(std::span<const double> xs, std::uint64_t seed, std::uint64_t index, int resamples = 200);

}  // namespace dlab::stochastic
