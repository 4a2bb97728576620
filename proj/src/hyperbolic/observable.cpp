#include "dlab/hyperbolic/observable.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <tuple>

#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"

namespace dlab::hyperbolic {

double bump(double s) noexcept {
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / q);
}

double bump_derivative(double s) noexcept {
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    return -2.0 * s / (q * q) * bump(s);
}

double bump_max_slope() noexcept {
    static const double slope = [] {
        const auto r = boost::math::tools::brent_find_minima([](double s) { return bump_derivative(s); }, 0.0, 1.0,
                                                             50);
        return -r.second;
    }();
    return slope;
}

double bump_integral(double r0, int power) {
    // Haar density in exponential coordinates: (sinh mu / mu)^2 with mu^2 = (y1^2 + y2^2 - y3^2) / 4.
    auto jacobian = [](double mu2) {
        if (std::abs(mu2) < 1e-8) return 1.0 + mu2 / 3.0;
        if (mu2 > 0.0) {
            const double m = std::sqrt(mu2);
            const double q = std::sinh(m) / m;
            return q * q;
        }
        const double m = std::sqrt(-mu2);
        const double q = std::sin(m) / m;
        return q * q;
    };
    // Spherical coordinates with polar axis y3; u = cos(polar angle).
    auto shell = [&](double rho) {
        return boost::math::quadrature::gauss<double, 30>::integrate(
            [&](double u) { return jacobian(0.25 * rho * rho * (1.0 - 2.0 * u * u)); }, -1.0, 1.0);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double radial = ts.integrate(
        [&](double s) {
            const double rho = r0 * s;
            return s * s * std::pow(bump(s), power) * shell(rho);
        },
        0.0, 1.0);
    const double volume = 8.0 * std::numbers::pi * std::numbers::pi;
    return 2.0 * std::numbers::pi * r0 * r0 * r0 * radial / volume;
}

Observable::Observable(const GroupElement& center, double r0) : r0_(r0) {
    const auto& s = bolza_group();
    if (!(r0 > 0.0) || !(r0 < 0.5 * s.group.systole)) {
        throw ConfigError("r0", "observable radius must lie in (0, systole/2)");
    }
    center_ = reduce_to_domain(center, s.group, s.domain).element;
    cosh_r0_ = std::cosh(r0);

    // Breadth-first search over tiles gamma D (neighbours gamma g_j D). A tile can meet the
    // ball of radius R around the centre only if its centre is within R + circumradius; tiles
    // on a path to it stay within one more circumradius.
    const double rho = s.domain.circumradius;
    const double keep = rho + r0 + 1e-9;
    const double prune = std::cosh(3.0 * rho + r0);
    using Key = std::tuple<long long, long long, long long, long long>;
    auto key = [](const GroupElement& g) {
        auto q = [](double v) { return std::llround(v * 1e6); };
        return Key{q(g.a()), q(g.b()), q(g.c()), q(g.d())};
    };
    std::map<Key, bool> seen;
    std::queue<GroupElement> frontier;
    frontier.push(GroupElement{});
    seen[key(GroupElement{})] = true;
    std::vector<std::pair<double, GroupElement>> found;
    while (!frontier.empty()) {
        const GroupElement gamma = frontier.front();
        frontier.pop();
        const GroupElement translate = gamma * center_;
        const double dist = std::acosh(std::max(1.0, 0.5 * translate.frobenius_sq()));
        if (dist <= keep) found.emplace_back(dist, translate);
        for (const auto& g : s.group.generators) {
            const GroupElement next = gamma * g;
            if (0.5 * next.frobenius_sq() > prune) continue;
            if (seen.emplace(key(next), true).second) frontier.push(next);
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& f : found) translates_.push_back(f.second);

    mean_ = bump_integral(r0, 1);
    mean_square_ = bump_integral(r0, 2);
}

double Observable::evaluate_reduced(const GroupElement& x) const {
    double acc = 0.0;
    for (const auto& h : translates_) {
        const GroupElement rel = h.inverse() * x;
        // The surrogate distance dominates the base-point distance, so this skip is exact.
        if (0.5 * rel.frobenius_sq() > cosh_r0_) continue;
        acc += bump(lie_norm(log_group(rel)) / r0_);
    }
    return acc;
}

double Observable::operator()(const GroupElement& x) const { return evaluate_reduced(reduce(x)); }

ObservableCombination& ObservableCombination::add(double coeff, const Observable& f) {
    terms_.emplace_back(coeff, f);
    return *this;
}

double ObservableCombination::evaluate_reduced(const GroupElement& x) const {
    double acc = constant_;
    for (const auto& [c, f] : terms_) acc += c * f.evaluate_reduced(x);
    return acc;
}

double ObservableCombination::operator()(const GroupElement& x) const {
    if (terms_.empty()) return constant_;
    return evaluate_reduced(reduce(x));
}

double ObservableCombination::mean() const noexcept {
    double acc = constant_;
    for (const auto& [c, f] : terms_) acc += c * f.mean();
    return acc;
}

bool ObservableCombination::is_constant() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first == 0.0; });
}

}  // namespace dlab::hyperbolic
