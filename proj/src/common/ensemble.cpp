#include "dlab/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "dlab/decay_curve.hpp"
#include "dlab/errors.hpp"

namespace dlab {

double DiffusionConfig::default_dt(double nu) noexcept {
    return nu > 0.0 ? std::min(0.02, 0.1 / std::sqrt(nu)) : 0.02;
}

void DiffusionConfig::validate() const {
    if (!std::isfinite(nu) || nu < 0.0) throw ConfigError("nu", "diffusion strength must be finite and >= 0");
    const double cap = nu > 0.0 ? std::min(0.05, 0.1 / std::sqrt(nu)) : 0.05;
    if (!std::isfinite(dt) || !(dt > 0.0) || dt > cap * (1.0 + 1e-12)) {
        throw ConfigError("dt", "time step must lie in (0, min(0.05, 0.1/sqrt(nu))]");
    }
}

void DecayCurve::validate() const {
    if (values.size() != times.size() || stderrs.size() != times.size()) {
        throw ValidationError("decay curve arrays differ in length");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ValidationError("decay curve times must strictly increase");
    }
    for (double s : stderrs) {
        if (!std::isfinite(s) || s < 0.0) throw ValidationError("decay curve standard errors must be finite");
    }
}

}  // namespace dlab
