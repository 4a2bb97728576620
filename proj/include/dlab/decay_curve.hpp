#pragma once

#include <string>
#include <vector>

namespace dlab {

/// Sampled decay curve. `power` says what is being tracked: 2 for squared L2 norms, 1 for
/// norms and correlations. Fitted rates are always reported for the norm, i.e. the
/// log-slope divided by `power`.
struct DecayCurve {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> stderrs;
    int power = 1;
    std::string label;

    std::size_t size() const noexcept { return times.size(); }
    // Throws ValidationError unless times strictly increase and the arrays agree in length.
    void validate() const;
};

}  // namespace dlab
