#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlab/hyperbolic/group_element.hpp"

namespace dlab {

/// Advection-diffusion parameters for the exponential-increment Euler scheme.
struct DiffusionConfig {
    double nu = 0.0;
    double dt = 0.02;

    // min(0.02, 0.1 / sqrt(nu)).
    static double default_dt(double nu) noexcept;
    static DiffusionConfig with_default_dt(double nu) noexcept { return {nu, default_dt(nu)}; }

    // Throws ConfigError unless nu >= 0 and 0 < dt <= min(0.05, 0.1 / sqrt(nu)).
    void validate() const;
};

struct ParticleEnsemble {
    std::vector<hyperbolic::GroupElement> states;
    double time = 0.0;
    DiffusionConfig config;
    std::uint64_t seed = 0;
    // Number of scheme steps already taken; particle i at step s uses noise block (seed, i, s).
    std::uint64_t steps = 0;
    std::string provenance;
};

}  // namespace dlab
