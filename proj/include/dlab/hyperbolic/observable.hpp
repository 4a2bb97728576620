#pragma once

#include <vector>

#include "dlab/hyperbolic/group_element.hpp"

namespace dlab::hyperbolic {

// Bump profile phi(s) = exp(1 - 1/(1 - s^2)) on |s| < 1, zero outside; phi(0) = 1.
double bump(double s) noexcept;
double bump_derivative(double s) noexcept;
// max |phi'| over [0, 1).
double bump_max_slope() noexcept;

/// f(x) = sum over gamma in Gamma of phi(d(x, gamma c) / r0), with d the surrogate distance
/// |log(.)| of the left-invariant metric. Since r0 is below half the systole, at most one
/// translate of the centre is within r0 of any point, so the sum is a single bump on the
/// quotient.
class Observable {
public:
    // Throws ConfigError unless 0 < r0 < systole / 2.
    Observable(const GroupElement& center, double r0);

    // Reduces x to the fundamental domain first.
    double operator()(const GroupElement& x) const;
    // x must already lie in the fundamental domain.
    double evaluate_reduced(const GroupElement& x) const;

    const GroupElement& center() const noexcept { return center_; }
    double radius() const noexcept { return r0_; }
    // Translates of the centre that can come within r0 of the domain.
    const std::vector<GroupElement>& translates() const noexcept { return translates_; }

    // Integrals against the normalized contact volume, by quadrature in exponential coordinates.
    double mean() const noexcept { return mean_; }
    double mean_square() const noexcept { return mean_square_; }

private:
    GroupElement center_;
    double r0_;
    double cosh_r0_;
    std::vector<GroupElement> translates_;
    double mean_ = 0.0;
    double mean_square_ = 0.0;
};

// Integral of phi(|Y| / r0)^power over the exponential-coordinate ball, against Haar measure,
// divided by the volume 8 pi^2 of the unit tangent bundle of the Bolza surface.
double bump_integral(double r0, int power);

/// constant + sum_i coeff_i f_i, evaluated with a single reduction per point.
class ObservableCombination {
public:
    ObservableCombination() = default;
    explicit ObservableCombination(double constant) : constant_(constant) {}

    ObservableCombination& add(double coeff, const Observable& f);

    double operator()(const GroupElement& x) const;
    double evaluate_reduced(const GroupElement& x) const;
    // Exact mean from the per-term quadratures.
    double mean() const noexcept;
    bool is_constant() const noexcept;

    double constant() const noexcept { return constant_; }
    const std::vector<std::pair<double, Observable>>& terms() const noexcept { return terms_; }

private:
    double constant_ = 0.0;
    std::vector<std::pair<double, Observable>> terms_;
};

}  // namespace dlab::hyperbolic
