#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dlab/spectral/operator.hpp"

namespace dlab::spectral {

struct SpectrumResult {
    OperatorKind kind = OperatorKind::Transfer;
    int N = 0;
    double nu = 0.0;
    // Sorted by decay rate, then by imaginary part.
    std::vector<cplx> eigenvalues;
    // Transfer: -log|mu| per step (infinite for mu = 0). Generator: Re lambda.
    std::vector<double> rates;
    cplx invariant;                  // eigenvalue closest to 1 (transfer) or 0 (generator)
    double gap = 0.0;                // smallest rate once the invariant eigenvalue is removed
    int invariant_multiplicity = 0;  // eigenvalues within 1e-8 of the invariant value
    double max_modulus = 0.0;        // transfer kind
    double min_real_part = 0.0;      // generator kind
    double conjugation_error = 0.0;  // max distance from conj(lambda) to the spectrum
    bool converged = true;           // set by truncation checks
};

double decay_rate(OperatorKind kind, cplx lambda) noexcept;

/// Full dense eigendecomposition (LAPACK zgeev, one call per coupled block). `keep`
/// restricts to an invariant set of modes, e.g. k1 != 0 for a shear flow. Throws
/// NumericalError if the eigensolver does not converge.
SpectrumResult spectrum_and_gap(const TruncatedOperator& op, const std::function<bool(int, int)>& keep = {});

// Eigenvalues of a general complex matrix (zgeev); throws NumericalError on failure.
std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& m);

/// Dominant eigenvalues of the operator restricted to mean-zero modes, by Arnoldi with full
/// reorthogonalization. Returns Ritz values whose residual bound is below tol, largest
/// modulus first.
std::vector<cplx> dominant_eigenvalues(const TruncatedOperator& op, int krylov_dim = 80, double tol = 1e-10);

/// Gap of the transfer operator from its dominant mean-zero eigenvalue (Arnoldi).
double dominant_gap(const TruncatedOperator& op);

// Minimal-cost assignment (Hungarian algorithm) for a rectangular cost matrix with
// rows <= cols; returns the column assigned to each row.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

struct MatchStep {
    double nu_from = 0.0;
    double nu_to = 0.0;
    int count_from = 0;
    int count_to = 0;
    double max_displacement = 0.0;
    bool boundary_crossing = false;  // eigenvalue count inside the region changed
};

struct MatchingReport {
    double region_radius = 0.0;
    std::vector<MatchStep> steps;
    double truncation_displacement = 0.0;  // N vs 2N at nu_list.back() unless overridden
    double truncation_nu = 0.0;
    bool truncation_stable = false;
    std::vector<std::vector<cplx>> region_eigenvalues;  // per nu, inside the region
};

// Eigenvalues of a and b inside {|mu| >= r}, matched by minimal total distance (ties by
// imaginary part); returns the max matched distance.
double matched_displacement(std::vector<cplx> a, std::vector<cplx> b, int* unmatched = nullptr);

/// Transfer-operator eigenvalues in {|mu| >= region_radius} followed across a decreasing
/// nu_list, plus the N vs 2N check at truncation_nu (the dominant part at 2N via Arnoldi).
/// Spectra at N already computed for some nu can be passed in `known` to skip their
/// eigendecomposition.
MatchingReport resonance_convergence(const TorusMap& map, const std::vector<double>& nu_list, double region_radius,
                                     int N, double truncation_nu,
                                     const std::map<double, std::vector<cplx>>* known = nullptr);

}  // namespace dlab::spectral
