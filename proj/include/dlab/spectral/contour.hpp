#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace dlab::spectral {

using cplx = std::complex<double>;

/// Vertical segment {Re l = beta, |Im l| <= H} with H = 1 + nu^{-2} + beta, continued by
/// the rays {|Im l| = 1 + nu^{-2} + Re l, Re l >= beta}. Traversed upward along the segment,
/// outward along the upper ray and inward along the lower one, it encircles everything to
/// its right clockwise, so that
///   e^{-tP} = Pi_0 + (1 / 2 pi i) int_C (P - l)^{-1} e^{-l t} dl
/// when the spectrum of P lies right of the segment apart from eigenvalues (with spectral
/// projector Pi_0) to its left.
struct Contour {
    double beta = 0.0;
    double nu = 1.0;

    double height() const noexcept { return 1.0 + 1.0 / (nu * nu) + beta; }
    cplx segment(double tau) const noexcept { return {beta, tau}; }
    // Rays parameterized by s = Re l - beta >= 0.
    cplx upper_ray(double s) const noexcept { return {beta + s, height() + s}; }
    cplx lower_ray(double s) const noexcept { return {beta + s, -(height() + s)}; }
    // Distance between the corners computed from the segment and from the rays.
    double corner_mismatch() const noexcept;
};

struct QuadratureSpec {
    double refinement_tol = 1e-8;   // stop halving once successive levels differ by this much
    double truncation = 1e-12;      // ray cut-off for e^{-t Re l} ||R(l)||
    double placement_tol = 1e-10;   // resolvent norm above 1/placement_tol is an error
    int max_levels = 14;
};

struct ResolventSample {
    cplx lambda;
    double norm = 0.0;
    bool on_segment = false;
};

struct ContourCheckResult {
    double max_deviation = 0.0;
    double max_segment_resolvent = 0.0;
    int levels = 0;
    std::size_t nodes_used = 0;
    // Real matrices and real-coefficient Fourier generators are conjugation symmetric: then
    // only the upper half is integrated and the lower half samples are mirrored.
    bool mirrored = false;
    std::vector<ResolventSample> samples;  // every node of the final level
    Eigen::MatrixXcd contour_value;
    Eigen::MatrixXcd dense_value;
};

/// Compares the contour representation of e^{-tP} with scaling-and-squaring. The matrix is
/// processed per coupled block. `residue` is Pi_0 (empty for none). Throws
/// ContourPlacementError if a node's resolvent norm exceeds 1/placement_tol, ConfigError if
/// t <= 0, NumericalError if refinement does not settle.
ContourCheckResult semigroup_contour_check(const Eigen::MatrixXcd& P, double t, const Contour& contour,
                                           const QuadratureSpec& quad = {},
                                           const Eigen::MatrixXcd& residue = Eigen::MatrixXcd());

// Blockwise exp(-tP) via scaling and squaring.
Eigen::MatrixXcd semigroup_dense(const Eigen::MatrixXcd& P, double t);

}  // namespace dlab::spectral
