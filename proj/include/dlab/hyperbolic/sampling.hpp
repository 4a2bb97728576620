#pragma once

#include <cstdint>

#include "dlab/ensemble.hpp"

namespace dlab::hyperbolic {

struct SamplingReport {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    // Area of the octagon over the area of the proposal disk: 1 / (1 + sqrt 2).
    double expected_acceptance = 0.0;
};

/// Independent draws from the normalized contact volume: hyperbolic area on the octagon
/// times a uniform fibre angle. Base points are proposed uniformly in the hyperbolic disk
/// of radius equal to the circumradius and rejected outside the octagon. Particle i uses
/// its own stream, so the draw does not depend on n or on worker count.
ParticleEnsemble sample_uniform(std::size_t n, std::uint64_t seed, SamplingReport* report = nullptr);

// Particle i of sample_uniform(., seed), computed on its own.
GroupElement sample_uniform_one(std::uint64_t seed, std::uint64_t index, std::uint64_t* proposals = nullptr);

}  // namespace dlab::hyperbolic

#include <span>

namespace dlab::hyperbolic {

struct UniformityTest {
    double statistic = 0.0;
    double p_value = 0.0;
    int cells = 64;
};

// Pearson chi-square over 64 equiprobable cells: 8 angular sectors of the base point,
// 2 radial shells split at cosh r = 2 (the inner disk carries exactly half the area), and
// 4 fibre-angle bins. States are reduced to the fundamental domain first.
UniformityTest chi_square_uniformity(std::span<const GroupElement> states);

}  // namespace dlab::hyperbolic
