#pragma once

#include <span>
#include <vector>

#include "dlab/hyperbolic/observable.hpp"

namespace dlab::analysis {

/// Fixed test-function family for equidistribution: 20 bumps with centres spread over the
/// octagon and the fibre, radii in {0.8, 1.05, 1.3}; integrals are the bumps' quadrature means.
struct Dictionary {
    std::vector<hyperbolic::Observable> observables;
    std::vector<double> integrals;
};

const Dictionary& discrepancy_dictionary();

struct DiscrepancyReport {
    double value = 0.0;       // max_j |empirical mean of f_j - integral of f_j|
    std::size_t argmax = 0;
    double stderr_ = 0.0;     // standard error of the empirical mean at argmax
    std::vector<double> deviations;  // signed, per dictionary member
    std::vector<double> stderrs;
};

/// Throws ValidationError on an empty ensemble. States are reduced to the domain first.
DiscrepancyReport discrepancy(std::span<const hyperbolic::GroupElement> states,
                              const Dictionary& dict = discrepancy_dictionary());

}  // namespace dlab::analysis
