#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "grid_oracle.hpp"
#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"
#include "dlab/hyperbolic/observable.hpp"
#include "dlab/hyperbolic/sampling.hpp"

using namespace dlab::hyperbolic;

TEST_CASE("bump profile") {
    CHECK(bump(0.0) == 1.0);
    CHECK(bump(1.0) == 0.0);
    CHECK(bump(-1.5) == 0.0);
    // Closed-form maximiser of |phi'|: 3s^4 = 1, s = 3^{-1/4}.
    const double s = std::pow(3.0, -0.25);
    CHECK(bump_max_slope() == doctest::Approx(-bump_derivative(s)).epsilon(1e-10));
    const double h = 1e-6;
    CHECK(bump_derivative(0.4) == doctest::Approx((bump(0.4 + h) - bump(0.4 - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("observable radius invariant") {
    const double half_systole = 0.5 * bolza_group().group.systole;
    CHECK_THROWS_AS(Observable(GroupElement{}, half_systole), dlab::ConfigError);
    CHECK_THROWS_AS(Observable(GroupElement{}, 0.0), dlab::ConfigError);
    CHECK_NOTHROW(Observable(GroupElement{}, half_systole - 1e-6));
}

TEST_CASE("observable peak, support and invariance") {
    const auto& s = bolza_group();
    std::mt19937_64 gen(4);
    std::normal_distribution<double> n;
    // Centre near a vertex so that several translates matter.
    const GroupElement c = from_disk(0.8 * s.domain.vertices[1], 0.3);
    const Observable f(c, 1.2);
    CHECK(f(c) == 1.0);
    CHECK(f.translates().size() > 1);
    int nonzero = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = c * exp_algebra({0.8 * n(gen), 0.8 * n(gen), 0.8 * n(gen)});
        const double fx = f(x);
        if (fx > 0) ++nonzero;
        for (const auto& g : s.group.generators) CHECK(std::abs(f(g * x) - fx) <= 1e-12);
        // Compact support: zero once every translate is further than r0.
        double nearest = 1e300;
        for (const auto& h : f.translates()) nearest = std::min(nearest, surrogate_distance(h, reduce(x)));
        if (nearest > f.radius()) CHECK(fx == 0.0);
        else CHECK(fx == doctest::Approx(bump(nearest / f.radius())).epsilon(1e-12));
    }
    CHECK(nonzero > 100);
}

TEST_CASE("observable gradient bound") {
    // Surrogate distance is not exactly 1-Lipschitz in the left-invariant metric; the
    // measured excess over the unit bound stays below 30% for radii up to 1.5.
    const Observable f(from_disk({0.2, -0.1}, 1.0), 1.0);
    const double bound = bump_max_slope() / f.radius() * 1.3;
    std::mt19937_64 gen(8);
    std::normal_distribution<double> n;
    const double h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const auto x = f.center() * exp_algebra({0.6 * n(gen), 0.6 * n(gen), 0.6 * n(gen)});
        double g2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            LieVector e{0, 0, 0};
            e[k] = h;
            LieVector me{0, 0, 0};
            me[k] = -h;
            const double d = (f(x * exp_algebra(e)) - f(x * exp_algebra(me))) / (2 * h);
            g2 += d * d;
        }
        worst = std::max(worst, std::sqrt(g2));
    }
    CHECK(worst <= bound);
    CHECK(worst > 0.5 * bump_max_slope() / f.radius());
}

TEST_CASE("observable mean against grid quadrature and sampling") {
    const Observable f(from_disk({0.3, 0.4}, 2.0), 1.1);
    const double grid = oracle::grid_integral([&](const GroupElement& x) { return f(x); }, 48, 24, 64);
    CHECK(f.mean() == doctest::Approx(grid).epsilon(2e-5));
    const double grid2 = oracle::grid_integral([&](const GroupElement& x) { return f(x) * f(x); }, 48, 24, 64);
    CHECK(f.mean_square() == doctest::Approx(grid2).epsilon(2e-5));

    const auto ens = sample_uniform(400000, 3);
    double acc = 0.0, acc2 = 0.0;
    for (const auto& x : ens.states) {
        const double v = f.evaluate_reduced(x);
        acc += v;
        acc2 += v * v;
    }
    const double m = acc / ens.states.size();
    const double se = std::sqrt((acc2 / ens.states.size() - m * m) / ens.states.size());
    CHECK(std::abs(m - f.mean()) < 3 * se);
}

TEST_CASE("combinations") {
    const Observable f(GroupElement{}, 1.0), g(from_disk({0.5, 0.0}, 1.0), 0.7);
    ObservableCombination u(0.25);
    u.add(2.0, f).add(-1.0, g);
    const auto x = from_disk({0.1, 0.05}, 0.4);
    CHECK(u(x) == doctest::Approx(0.25 + 2.0 * f(x) - g(x)).epsilon(1e-15));
    CHECK(u.mean() == doctest::Approx(0.25 + 2.0 * f.mean() - g.mean()));
    CHECK(ObservableCombination(3.0).is_constant());
    CHECK_FALSE(u.is_constant());
}
