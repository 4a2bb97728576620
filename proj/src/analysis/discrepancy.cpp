#include "dlab/analysis/discrepancy.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"
#include "dlab/numerics.hpp"

namespace dlab::analysis {

using hyperbolic::GroupElement;

const Dictionary& discrepancy_dictionary() {
    static const Dictionary dict = [] {
        Dictionary d;
        constexpr double golden = 0.6180339887498949;
        for (int j = 0; j < 20; ++j) {
            const double r = 0.55 * std::sqrt((j + 0.5) / 20.0);
            const double alpha = 2.0 * std::numbers::pi * std::fmod(j * golden, 1.0);
            const double theta = 2.0 * std::numbers::pi * std::fmod(0.1 + j * (1.0 - golden), 1.0);
            const GroupElement c = hyperbolic::from_disk(std::polar(r, alpha), theta);
            d.observables.emplace_back(c, 0.8 + 0.25 * (j % 3));
            d.integrals.push_back(d.observables.back().mean());
        }
        return d;
    }();
    return dict;
}

DiscrepancyReport discrepancy(std::span<const GroupElement> states, const Dictionary& dict) {
    if (states.empty()) throw ValidationError("discrepancy of an empty ensemble");
    const std::size_t n = states.size(), m = dict.observables.size();
    // values[j * n + i] = f_j(x_i)
    std::vector<double> values(m * n);
    parallel_for(n, default_workers(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const GroupElement x = hyperbolic::reduce(states[i]);
            for (std::size_t j = 0; j < m; ++j) values[j * n + i] = dict.observables[j].evaluate_reduced(x);
        }
    });
    DiscrepancyReport rep;
    for (std::size_t j = 0; j < m; ++j) {
        const std::span<const double> col(values.data() + j * n, n);
        const double mean = pairwise_sum(col) / static_cast<double>(n);
        const double se = n > 1 ? mean_and_stderr(col).stderr_ : 0.0;
        const double dev = mean - dict.integrals[j];
        rep.deviations.push_back(dev);
        rep.stderrs.push_back(se);
        if (j == 0 || std::abs(dev) > rep.value) {
            rep.value = std::abs(dev);
            rep.argmax = j;
            rep.stderr_ = se;
        }
    }
    return rep;
}

}  // namespace dlab::analysis
