#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dlab/decay_curve.hpp"

namespace dlab::analysis {

struct Window {
    double t0 = 0.0;
    double t1 = 0.0;
};

/// Exponential fit value(t) ~ (C e^{-beta t})^power.
struct DecayFit {
    double beta = 0.0;      // norm decay rate
    double prefactor = 0.0; // norm prefactor C
    Window window;
    double r_squared = 0.0;
    double ci_lo = 0.0;     // 95% bootstrap interval for beta
    double ci_hi = 0.0;
    std::size_t points_used = 0;
    std::vector<double> excluded_times;  // in the window but within 2 sigma of zero
    bool converged = true;
};

// Standard error used for fitting: the curve's own (at least 1e-12 relative). A zero error
// means the curve was computed directly, so roundoff relative to value(0) sets the floor.
double effective_stderr(const DecayCurve& curve, std::size_t i) noexcept;

// [first t with value <= value(0)/e, last t before value drops below k * stderr].
// Throws FitError if that leaves no room.
Window default_window(const DecayCurve& curve, double k = 10.0);

// Weighted least squares of log(value) on t with weights (value/stderr)^2, plus a parametric
// bootstrap (curve values redrawn from their standard errors) for the 95% interval.
// Throws FitError with fewer than 6 usable points.
DecayFit fit_exponential(const DecayCurve& curve, std::optional<Window> window = std::nullopt,
                         std::uint64_t bootstrap_seed = 0x5eed, int resamples = 1000);

struct RateSweep {
    std::vector<double> nus;  // strictly decreasing
    std::vector<DecayFit> fits;
    double k_hat = 0.0;       // slope of log C against log(1/nu)
    double beta_floor = 0.0;
    double beta_floor_lo = 0.0;
    double beta_floor_hi = 0.0;
    bool partial = false;     // some member fit is flagged unconverged
};

// Throws ConfigError with fewer than 4 members or a non-decreasing nu list.
RateSweep prefactor_exponent(const std::vector<double>& nus, const std::vector<DecayFit>& fits);

struct EnvelopeReport {
    double log_inv_nu = 0.0;
    double c_env = 0.0;
    double c_env_min = 1.0;   // smallest constant for which (i) holds
    bool envelope_pass = true;
    std::vector<double> envelope_violations;  // times
    bool short_time_pass = true;
    std::vector<double> short_time_violations;
};

/// (i) value(t) <= (C_env e^{-t/log(1/nu)})^power value(0) + 2 sigma at every sample;
/// (ii) value(t) <= e^{power C_poinc nu t} value(0) + 2 sigma for t <= c_short log(1/nu).
/// sigma is the error of value(t) - bound: value(0) is itself an estimate, so with a bound
/// B = m value(0) it is sqrt(sigma_t^2 + m^2 sigma_0^2).
/// When value(0) is known exactly (initial) it replaces the estimate and sigma_0 = 0.
/// Throws ConfigError unless 0 < nu < 1/e.
EnvelopeReport envelope_checks(const DecayCurve& curve, double nu, double c_env = 10.0, double c_poinc = 1.0,
                               double c_short = 1.0, std::optional<double> initial = std::nullopt);

}  // namespace dlab::analysis
