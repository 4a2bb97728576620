#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dlab/decay_curve.hpp"
#include "dlab/spectral/operator.hpp"
#include "dlab/spectral/spectrum.hpp"

namespace dlab::spectral {

/// Real, mean-zero, smooth initial condition on the mode lattice:
/// u0_k = exp(-|k|^2 / 2) (1 + i k1 / 4) for 0 < |k|_inf <= 4, zero elsewhere.
Eigen::VectorXcd smooth_initial_condition(const ModeLattice& modes);

/// ||L^n u0||^2 for n = 0..steps (power 2). Each step is renormalized and the log norms are
/// accumulated, so the curve stays exact to relative roundoff far below value(0); the
/// reported standard error is that relative roundoff, 1e-13 (n + 1) value(n).
DecayCurve map_decay_curve(const TruncatedOperator& transfer, const Eigen::VectorXcd& u0, int steps);

/// ||e^{-tP} u0||^2 at the given times for a generator (blockwise matrix exponential).
DecayCurve generator_decay_curve(const TruncatedOperator& generator, const Eigen::VectorXcd& u0,
                                 const std::vector<double>& times);

struct GapRow {
    double nu = 0.0;
    double gap = 0.0;
    int N = 0;
    double gap_2N = 0.0;
    bool converged = false;  // |gap_2N - gap| <= 1% of gap
};

/// Transfer-operator gap at N (dense) and 2N (Arnoldi) for each nu. The dense spectra at N
/// are appended to `spectra` when given.
std::vector<GapRow> map_gap_sweep(const TorusMap& map, const std::vector<double>& nus, int N,
                                  std::vector<SpectrumResult>* spectra = nullptr);

/// Generator gap on the modes accepted by `keep`, dense at N and 2N.
std::vector<GapRow> generator_gap_sweep(const VelocityField& v, const std::vector<double>& nus, int N,
                                        const std::function<bool(int, int)>& keep = {},
                                        std::vector<SpectrumResult>* spectra = nullptr);

// Least-squares slope of log gap against log nu.
double gap_scaling_exponent(const std::vector<GapRow>& rows);

// Largest of gap / median and median / gap over the sweep.
double gap_spread_factor(const std::vector<GapRow>& rows);

}  // namespace dlab::spectral
