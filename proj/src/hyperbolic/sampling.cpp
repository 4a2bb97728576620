#include "dlab/hyperbolic/sampling.hpp"

#include <cmath>
#include <numbers>

#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"
#include "dlab/numerics.hpp"
#include "dlab/random.hpp"

namespace dlab::hyperbolic {

GroupElement sample_uniform_one(std::uint64_t seed, std::uint64_t index, std::uint64_t* proposals) {
    const auto& dom = bolza_group().domain;
    const double cosh_max = std::cosh(dom.circumradius);
    rng::Stream stream(seed, rng::StreamTag::Sampling, index);
    std::uint64_t tries = 0;
    for (;;) {
        ++tries;
        // Hyperbolic disk area grows like cosh r - 1, so this is area-uniform in radius.
        const double r = std::acosh(1.0 + stream.uniform() * (cosh_max - 1.0));
        const double alpha = 2.0 * std::numbers::pi * stream.uniform();
        const double psi = 2.0 * std::numbers::pi * stream.uniform();
        if (!dom.contains_disk_point(std::polar(std::tanh(0.5 * r), alpha))) continue;
        if (proposals) *proposals = tries;
        return rotation(alpha) * geodesic_flow(GroupElement{}, r) * rotation(psi);
    }
}

ParticleEnsemble sample_uniform(std::size_t n, std::uint64_t seed, SamplingReport* report) {
    if (n == 0) throw ConfigError("n", "sample_uniform needs at least one sample");
    ParticleEnsemble ens;
    ens.states.resize(n);
    ens.seed = seed;
    ens.provenance = "uniform";
    std::vector<std::uint64_t> tries(n);
    parallel_for(n, default_workers(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) ens.states[i] = sample_uniform_one(seed, i, &tries[i]);
    });
    if (report) {
        report->proposals = 0;
        for (auto t : tries) report->proposals += t;
        report->accepted = n;
        report->expected_acceptance = 1.0 / (1.0 + std::numbers::sqrt2);
    }
    return ens;
}

}  // namespace dlab::hyperbolic

#include <boost/math/distributions/chi_squared.hpp>

namespace dlab::hyperbolic {

UniformityTest chi_square_uniformity(std::span<const GroupElement> states) {
    if (states.empty()) throw ConfigError("states", "uniformity test needs a non-empty sample");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<int> cell(states.size());
    parallel_for(states.size(), default_workers(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const auto p = to_disk(reduce(states[i]));
            double alpha = std::arg(p.z);
            if (alpha < 0.0) alpha += two_pi;
            const int sector = std::min(7, static_cast<int>(alpha / (two_pi / 8)));
            const int shell = std::norm(p.z) < 1.0 / 3.0 ? 0 : 1;
            const int fibre = std::min(3, static_cast<int>(p.theta / (two_pi / 4)));
            cell[i] = (sector * 2 + shell) * 4 + fibre;
        }
    });
    std::vector<double> counts(64, 0.0);
    for (int c : cell) counts[c] += 1.0;
    const double expected = static_cast<double>(states.size()) / 64.0;
    UniformityTest out;
    for (double c : counts) out.statistic += (c - expected) * (c - expected) / expected;
    boost::math::chi_squared dist(63);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    return out;
}

}  // namespace dlab::hyperbolic
