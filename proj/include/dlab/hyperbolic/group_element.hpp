#pragma once

#include <array>
#include <complex>

namespace dlab::hyperbolic {

using Complex = std::complex<double>;

/// An element of PSL(2,R): a unit-determinant real 2x2 matrix modulo sign.
///
/// A group element is also a unit tangent vector of the hyperbolic plane: g maps the
/// upward unit vector at i (half-plane model) to the tangent vector it represents.
/// Left multiplication is the isometric action of the deck group; right multiplication by
/// diag(e^{t/2}, e^{-t/2}) is the geodesic flow.
///
/// Every constructor and product renormalizes by sqrt(det) once the determinant drifts
/// by more than 1e-13 and stores the sign representative whose first nonzero entry is
/// positive, so two representatives of the same class compare equal entrywise.
class GroupElement {
public:
    constexpr GroupElement() noexcept = default;

    // Throws DomainError when det <= 0 or the entries are not finite.
    static GroupElement from_entries(double a, double b, double c, double d);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double c() const noexcept { return c_; }
    double d() const noexcept { return d_; }

    double det() const noexcept { return a_ * d_ - b_ * c_; }
    double trace() const noexcept { return a_ + d_; }
    // a^2+b^2+c^2+d^2; equals 2 cosh of the hyperbolic distance between g(i) and i.
    double frobenius_sq() const noexcept { return a_ * a_ + b_ * b_ + c_ * c_ + d_ * d_; }

    GroupElement inverse() const noexcept;
    GroupElement operator*(const GroupElement& rhs) const noexcept;

    bool operator==(const GroupElement&) const = default;

private:
    constexpr GroupElement(double a, double b, double c, double d) noexcept : a_(a), b_(b), c_(c), d_(d) {}
    void normalize() noexcept;

    double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
};

// Max-norm distance between sign-canonical representatives.
double max_norm_distance(const GroupElement& g, const GroupElement& h) noexcept;

/// Coordinates in the orthonormal basis of sl(2,R):
///   X1 = diag(1/2, -1/2)              (geodesic generator),
///   X2 = [[0, 1/2], [1/2, 0]],
///   X3 = [[0, 1/2], [-1/2, 0]]        (fibre rotation).
/// The left-invariant metric is the one making {X1, X2, X3} orthonormal.
using LieVector = std::array<double, 3>;

GroupElement exp_algebra(const LieVector& y) noexcept;

// Principal logarithm of the trace >= 0 representative.
LieVector log_group(const GroupElement& g) noexcept;

double lie_norm(const LieVector& y) noexcept;

// Left-invariant distance surrogate |log(g^{-1} h)|. It bounds the Riemannian distance from
// above (exp(sY), s in [0,1], is a curve of length |Y|), hence also the base-point distance.
double surrogate_distance(const GroupElement& g, const GroupElement& h) noexcept;

// Base-point hyperbolic distance d(g(i), h(i)).
double base_distance(const GroupElement& g, const GroupElement& h) noexcept;

// g * diag(e^{t/2}, e^{-t/2}).
GroupElement geodesic_flow(const GroupElement& g, double t) noexcept;

// exp(phi X3): rotates the fibre by angle phi (about i in the half-plane, about 0 in the disk).
GroupElement rotation(double phi) noexcept;

enum class Model { Disk, HalfPlane };

// Moebius image of z under g in the chosen model (the disk action is conjugated by the
// Cayley transform). Throws DomainError if z is not strictly inside the model.
Complex mobius_apply(const GroupElement& g, Complex z, Model model);

/// Output-only disk view of a unit tangent vector: base point z (|z| < 1) and direction
/// angle theta in [0, 2pi).
struct DiskPoint {
    Complex z;
    double theta = 0.0;
};

DiskPoint to_disk(const GroupElement& g) noexcept;
// Throws DomainError if |z| >= 1.
GroupElement from_disk(Complex z, double theta);

}  // namespace dlab::hyperbolic
