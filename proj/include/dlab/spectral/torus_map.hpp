#pragma once

#include <array>
#include <vector>

namespace dlab::spectral {

/// One real Fourier term of a vector field on the 2-torus:
///   field[component](x) += sin_amp * sin(2 pi q.x) + cos_amp * cos(2 pi q.x).
struct TrigTerm {
    int component = 0;
    int q1 = 0;
    int q2 = 0;
    double sin_amp = 0.0;
    double cos_amp = 0.0;
};

// Evaluation helpers shared by maps and velocity fields.
std::array<double, 2> trig_field(const std::vector<TrigTerm>& terms, double x1, double x2) noexcept;
// Row-major 2x2 Jacobian d field_c / d x_j.
std::array<double, 4> trig_jacobian(const std::vector<TrigTerm>& terms, double x1, double x2) noexcept;
int trig_bandwidth(const std::vector<TrigTerm>& terms) noexcept;

/// T(x) = A x + eps psi(x) mod 1 with A in SL(2,Z) hyperbolic.
///
/// Construction checks, each on a grid:
///   - T is a diffeomorphism: sup ||eps D psi|| < 1 / ||A^{-1}||;
///   - T preserves area: det DT = 1 (so composition is an L2 isometry);
///   - the constant cone {|v_s| <= |v_u|} around the unstable eigenline of A is mapped
///     strictly into itself by DT on a 64 x 64 grid.
/// Any failure throws ValidationError.
class TorusMap {
public:
    TorusMap(std::array<int, 4> a, double eps, std::vector<TrigTerm> psi);

    // A = [[2,1],[1,1]] with psi(x) = (sin(2 pi (x1 + x2)) / (2 pi), 0): a shear applied after
    // the cat map.
    static TorusMap perturbed_cat(double eps);

    std::array<double, 2> apply(double x1, double x2) const noexcept;
    std::array<double, 4> jacobian(double x1, double x2) const noexcept;

    const std::array<int, 4>& linear() const noexcept { return a_; }
    double eps() const noexcept { return eps_; }
    const std::vector<TrigTerm>& psi() const noexcept { return psi_; }

    // sup ||eps D psi|| and 1 / ||A^{-1}||.
    double perturbation_norm() const noexcept { return pert_norm_; }
    double diffeo_bound() const noexcept { return diffeo_bound_; }
    // Largest |v_s|/|v_u| over images of the cone edges; < 1 certifies invariance.
    double cone_ratio() const noexcept { return cone_ratio_; }
    // log of the expanding eigenvalue of A.
    double linear_lyapunov() const noexcept;

private:
    std::array<int, 4> a_;
    double eps_;
    std::vector<TrigTerm> psi_;
    double pert_norm_ = 0.0;
    double diffeo_bound_ = 0.0;
    double cone_ratio_ = 0.0;
};

}  // namespace dlab::spectral
