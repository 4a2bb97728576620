#include "dlab/hyperbolic/group_element.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlab/errors.hpp"

namespace dlab::hyperbolic {

namespace {

constexpr double kDetDrift = 1e-13;

}  // namespace

GroupElement GroupElement::from_entries(double a, double b, double c, double d) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
        throw DomainError("group element with non-finite entries");
    }
    if (a * d - b * c <= 0.0) throw DomainError("group element needs a positive determinant");
    GroupElement g(a, b, c, d);
    g.normalize();
    return g;
}

void GroupElement::normalize() noexcept {
    const double det = a_ * d_ - b_ * c_;
    if (std::abs(det - 1.0) > kDetDrift) {
        const double s = 1.0 / std::sqrt(det);
        a_ *= s;
        b_ *= s;
        c_ *= s;
        d_ *= s;
    }
    const double lead = a_ != 0.0 ? a_ : (b_ != 0.0 ? b_ : (c_ != 0.0 ? c_ : d_));
    if (lead < 0.0) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
        d_ = -d_;
    }
}

GroupElement GroupElement::inverse() const noexcept {
    GroupElement g(d_, -b_, -c_, a_);
    g.normalize();
    return g;
}

GroupElement GroupElement::operator*(const GroupElement& r) const noexcept {
    GroupElement g(a_ * r.a_ + b_ * r.c_, a_ * r.b_ + b_ * r.d_, c_ * r.a_ + d_ * r.c_, c_ * r.b_ + d_ * r.d_);
    g.normalize();
    return g;
}

double max_norm_distance(const GroupElement& g, const GroupElement& h) noexcept {
    return std::max({std::abs(g.a() - h.a()), std::abs(g.b() - h.b()), std::abs(g.c() - h.c()),
                     std::abs(g.d() - h.d())});
}

GroupElement exp_algebra(const LieVector& y) noexcept {
    const double y11 = 0.5 * y[0];
    const double y12 = 0.5 * (y[1] + y[2]);
    const double y21 = 0.5 * (y[1] - y[2]);
    // Y^2 = delta * I for traceless Y.
    const double delta = y11 * y11 + y12 * y21;
    double c, s;
    if (std::abs(delta) < 1e-3) {
        c = 1.0 + delta * (1.0 / 2 + delta * (1.0 / 24 + delta * (1.0 / 720 + delta / 40320)));
        s = 1.0 + delta * (1.0 / 6 + delta * (1.0 / 120 + delta * (1.0 / 5040 + delta / 362880)));
    } else if (delta > 0.0) {
        const double r = std::sqrt(delta);
        c = std::cosh(r);
        s = std::sinh(r) / r;
    } else {
        const double r = std::sqrt(-delta);
        c = std::cos(r);
        s = std::sin(r) / r;
    }
    return GroupElement::from_entries(c + s * y11, s * y12, s * y21, c - s * y11);
}

LieVector log_group(const GroupElement& g) noexcept {
    double a = g.a(), b = g.b(), c = g.c(), d = g.d();
    if (a + d < 0.0) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
    const double half_trace = 0.5 * (a + d);
    const double u = half_trace - 1.0;
    double f;
    if (std::abs(u) < 1e-6) {
        f = 1.0 - u / 3.0 + 2.0 * u * u / 15.0;
    } else if (u > 0.0) {
        const double sh = std::sqrt(u * (2.0 + u));
        f = std::log1p(u + sh) / sh;
    } else {
        const double w = -u;
        const double theta = 2.0 * std::asin(std::sqrt(0.5 * w));
        f = theta / std::sqrt(w * (2.0 - w));
    }
    return {f * (a - d), f * (b + c), f * (b - c)};
}

double lie_norm(const LieVector& y) noexcept { return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]); }

double surrogate_distance(const GroupElement& g, const GroupElement& h) noexcept {
    return lie_norm(log_group(g.inverse() * h));
}

double base_distance(const GroupElement& g, const GroupElement& h) noexcept {
    const double ch = 0.5 * (g.inverse() * h).frobenius_sq();
    return std::acosh(std::max(1.0, ch));
}

GroupElement geodesic_flow(const GroupElement& g, double t) noexcept {
    const double e = std::exp(0.5 * t);
    const double ie = std::exp(-0.5 * t);
    return GroupElement::from_entries(g.a() * e, g.b() * ie, g.c() * e, g.d() * ie);
}

GroupElement rotation(double phi) noexcept {
    const double c = std::cos(0.5 * phi);
    const double s = std::sin(0.5 * phi);
    return GroupElement::from_entries(c, s, -s, c);
}

Complex mobius_apply(const GroupElement& g, Complex z, Model model) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("mobius_apply: non-finite point");
    if (model == Model::HalfPlane) {
        if (!(z.imag() > 0.0)) throw DomainError("mobius_apply: point not in the upper half-plane");
        return (g.a() * z + g.b()) / (g.c() * z + g.d());
    }
    if (!(std::abs(z) < 1.0)) throw DomainError("mobius_apply: point not in the open unit disk");
    // Cayley conjugate of g acting on the disk: z -> (alpha z + beta) / (conj(beta) z + conj(alpha)).
    const Complex alpha(0.5 * (g.a() + g.d()), 0.5 * (g.b() - g.c()));
    const Complex beta(0.5 * (g.a() - g.d()), -0.5 * (g.b() + g.c()));
    return (alpha * z + beta) / (std::conj(beta) * z + std::conj(alpha));
}

DiskPoint to_disk(const GroupElement& g) noexcept {
    const Complex den(g.b() - g.c(), g.a() + g.d());
    const Complex num(g.b() + g.c(), g.a() - g.d());
    double theta = std::numbers::pi - 2.0 * std::arg(den);
    theta = std::fmod(theta, 2.0 * std::numbers::pi);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    return {num / den, theta};
}

GroupElement from_disk(Complex z, double theta) {
    if (!(std::abs(z) < 1.0)) throw DomainError("from_disk: base point not in the open unit disk");
    const Complex w = Complex(0.0, 1.0) * (1.0 + z) / (1.0 - z);
    const double sy = std::sqrt(w.imag());
    const GroupElement base = GroupElement::from_entries(sy, w.real() / sy, 0.0, 1.0 / sy);
    return base * rotation(theta - to_disk(base).theta);
}

}  // namespace dlab::hyperbolic
