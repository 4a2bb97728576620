#include "dlab/spectral/torus_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlab/errors.hpp"

namespace dlab::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm2x2(const std::array<double, 4>& m) {
    // Largest singular value of [[a, b], [c, d]].
    const double s = m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3];
    const double det = m[0] * m[3] - m[1] * m[2];
    return std::sqrt(0.5 * (s + std::sqrt(std::max(0.0, s * s - 4.0 * det * det))));
}

double wrap(double v) {
    v -= std::floor(v);
    return v >= 1.0 ? 0.0 : v;
}

}  // namespace

std::array<double, 2> trig_field(const std::vector<TrigTerm>& terms, double x1, double x2) noexcept {
    std::array<double, 2> out{0.0, 0.0};
    for (const auto& t : terms) {
        const double ph = kTwoPi * (t.q1 * x1 + t.q2 * x2);
        out[t.component] += t.sin_amp * std::sin(ph) + t.cos_amp * std::cos(ph);
    }
    return out;
}

std::array<double, 4> trig_jacobian(const std::vector<TrigTerm>& terms, double x1, double x2) noexcept {
    std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
    for (const auto& t : terms) {
        const double ph = kTwoPi * (t.q1 * x1 + t.q2 * x2);
        const double d = kTwoPi * (t.sin_amp * std::cos(ph) - t.cos_amp * std::sin(ph));
        out[2 * t.component] += d * t.q1;
        out[2 * t.component + 1] += d * t.q2;
    }
    return out;
}

int trig_bandwidth(const std::vector<TrigTerm>& terms) noexcept {
    int b = 0;
    for (const auto& t : terms) b = std::max({b, std::abs(t.q1), std::abs(t.q2)});
    return b;
}

TorusMap::TorusMap(std::array<int, 4> a, double eps, std::vector<TrigTerm> psi)
    : a_(a), eps_(eps), psi_(std::move(psi)) {
    if (a_[0] * a_[3] - a_[1] * a_[2] != 1) throw ValidationError("torus map: det A must be 1");
    if (std::abs(a_[0] + a_[3]) <= 2) throw ValidationError("torus map: A must be hyperbolic (|trace| > 2)");
    if (!(eps_ >= 0.0) || !std::isfinite(eps_)) throw ValidationError("torus map: eps must be finite and >= 0");
    for (const auto& t : psi_) {
        if (t.component < 0 || t.component > 1) throw ValidationError("torus map: term component must be 0 or 1");
    }

    const std::array<double, 4> ainv{static_cast<double>(a_[3]), static_cast<double>(-a_[1]),
                                     static_cast<double>(-a_[2]), static_cast<double>(a_[0])};
    diffeo_bound_ = 1.0 / norm2x2(ainv);

    // Eigenbasis of A: expanding eigenvalue lu, eigenvectors eu, es (normalized).
    const double tr = a_[0] + a_[3];
    const double lu = 0.5 * (tr + std::copysign(std::sqrt(tr * tr - 4.0), tr));
    const double ls = 1.0 / lu;
    auto eigvec = [&](double l) {
        std::array<double, 2> v = a_[1] != 0 ? std::array<double, 2>{static_cast<double>(a_[1]), l - a_[0]}
                                             : std::array<double, 2>{l - a_[3], static_cast<double>(a_[2])};
        const double n = std::hypot(v[0], v[1]);
        return std::array<double, 2>{v[0] / n, v[1] / n};
    };
    const auto eu = eigvec(lu), es = eigvec(ls);
    const double det_e = eu[0] * es[1] - eu[1] * es[0];

    constexpr int kGrid = 256;
    constexpr int kConeGrid = 64;
    for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
            const double x1 = static_cast<double>(i) / kGrid, x2 = static_cast<double>(j) / kGrid;
            auto d = trig_jacobian(psi_, x1, x2);
            for (auto& v : d) v *= eps_;
            pert_norm_ = std::max(pert_norm_, norm2x2(d));
            const auto dt = jacobian(x1, x2);
            if (std::abs(dt[0] * dt[3] - dt[1] * dt[2] - 1.0) > 1e-12) {
                throw ValidationError("torus map: perturbation does not preserve area");
            }
            if (i % (kGrid / kConeGrid) || j % (kGrid / kConeGrid)) continue;
            for (double sgn : {1.0, -1.0}) {
                const std::array<double, 2> v{eu[0] + sgn * es[0], eu[1] + sgn * es[1]};
                const double w0 = dt[0] * v[0] + dt[1] * v[1];
                const double w1 = dt[2] * v[0] + dt[3] * v[1];
                // Coordinates of w in the (eu, es) basis.
                const double cu = (w0 * es[1] - w1 * es[0]) / det_e;
                const double cs = (eu[0] * w1 - eu[1] * w0) / det_e;
                cone_ratio_ = std::max(cone_ratio_, std::abs(cs) / std::abs(cu));
            }
        }
    }
    if (!(pert_norm_ < diffeo_bound_)) throw ValidationError("torus map: perturbation too large for a diffeomorphism");
    if (!(cone_ratio_ < 1.0)) throw ValidationError("torus map: no strictly invariant constant cone");
}

TorusMap TorusMap::perturbed_cat(double eps) {
    return TorusMap({2, 1, 1, 1}, eps, {TrigTerm{0, 1, 1, 1.0 / kTwoPi, 0.0}});
}

std::array<double, 2> TorusMap::apply(double x1, double x2) const noexcept {
    const auto p = trig_field(psi_, x1, x2);
    return {wrap(a_[0] * x1 + a_[1] * x2 + eps_ * p[0]), wrap(a_[2] * x1 + a_[3] * x2 + eps_ * p[1])};
}

std::array<double, 4> TorusMap::jacobian(double x1, double x2) const noexcept {
    const auto d = trig_jacobian(psi_, x1, x2);
    return {a_[0] + eps_ * d[0], a_[1] + eps_ * d[1], a_[2] + eps_ * d[2], a_[3] + eps_ * d[3]};
}

double TorusMap::linear_lyapunov() const noexcept {
    const double tr = std::abs(a_[0] + a_[3]);
    return std::log(0.5 * (tr + std::sqrt(tr * tr - 4.0)));
}

}  // namespace dlab::spectral
