#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "estimator_cases.hpp"
#include "grid_oracle.hpp"
#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"
#include "dlab/hyperbolic/sampling.hpp"
#include "dlab/numerics.hpp"
#include "dlab/random.hpp"
#include "dlab/stochastic/flow.hpp"

using namespace dlab;
using namespace dlab::hyperbolic;
using namespace dlab::stochastic;

namespace {

// Central differences along the left-invariant fields X1, X2, X3.
template <class F>
double lie_derivative(F&& f, const GroupElement& g, int axis, double h = 1e-4) {
    LieVector y{0, 0, 0};
    y[axis] = h;
    const auto plus = g * exp_algebra(y);
    y[axis] = -h;
    const auto minus = g * exp_algebra(y);
    return (f(plus) - f(minus)) / (2 * h);
}

template <class F>
double laplacian(F&& f, const GroupElement& g, double h = 1e-3) {
    double s = 0.0;
    const double f0 = f(g);
    for (int axis = 0; axis < 3; ++axis) {
        LieVector y{0, 0, 0};
        y[axis] = h;
        const double p = f(g * exp_algebra(y));
        y[axis] = -h;
        const double m = f(g * exp_algebra(y));
        s += (p - 2 * f0 + m) / (h * h);
    }
    return s;
}

ObservableCombination two_bumps() {
    ObservableCombination u;
    u.add(1.0, Observable(GroupElement{}, 1.2));
    u.add(-0.7, Observable(from_disk({0.3, 0.2}, 1.0), 1.0));
    return u;
}

// Points at most 0.65 r0 inside a bump or at least 0.15 r0 outside it. Near the support edge
// the bump is flat but has large high derivatives, so Taylor remainders are not small there.
std::vector<GroupElement> test_points() {
    const auto c2 = from_disk({0.3, 0.2}, 1.0);
    return {exp_algebra({0.3, -0.2, 0.5}), exp_algebra({-0.5, 0.3, -0.2}), c2 * exp_algebra({0.2, 0.3, -0.3}),
            c2 * exp_algebra({-0.4, 0.0, 0.3}), exp_algebra({0.1, 0.6, 0.2})};
}

}  // namespace

TEST_CASE("sde step: degenerate noise and determinant") {
    const GroupElement g = from_disk({0.2, -0.3}, 1.1);
    CHECK(sde_step(g, {0.0, 0.02}, {0.7, -1.2, 0.3}) == geodesic_flow(g, -0.02));
    rng::Stream s(3, rng::StreamTag::Synthetic, 0);
    GroupElement x = g;
    for (int i = 0; i < 10000; ++i) {
        // Reduced each step, as in the solvers; unreduced entries grow and a*d - b*c loses digits.
        x = reduce(sde_step(x, {0.3, 0.02}, s.step_noise(i)));
        REQUIRE(std::abs(x.det() - 1.0) <= 1e-12);
    }
}

TEST_CASE("sde step generator against finite differences") {
    // (E f(step(g)) - f(g)) / dt -> (-X1 f + nu Delta f)(g). Antithetic noise pairs cancel the
    // first-order noise term, leaving Monte Carlo error of order sqrt(nu dt / n).
    const auto u = two_bumps();
    const double nu = 0.2, dt = 2e-3;
    const std::size_t n = 100000;
    for (const auto& g : test_points()) {
        const double oracle = -lie_derivative(u, g, 0) + nu * laplacian(u, g);
        const double f0 = u(g);
        std::vector<double> d(n);
        rng::Stream s(17, rng::StreamTag::Synthetic, 1);
        for (std::size_t i = 0; i < n; ++i) {
            auto xi = s.step_noise(i);
            const double a = u(sde_step(g, {nu, dt}, xi));
            for (auto& c : xi) c = -c;
            const double b = u(sde_step(g, {nu, dt}, xi));
            d[i] = (0.5 * (a + b) - f0) / dt;
        }
        const auto me = mean_and_stderr(d);
        MESSAGE("generator " << me.mean << " oracle " << oracle << " se " << me.stderr_);
        // Second-order terms of the bump (slope / r0^2 of order 1) times dt.
        CHECK(std::abs(me.mean - oracle) <= 5.0 * dt + 3.0 * me.stderr_);
    }
}

TEST_CASE("pointwise solution") {
    const DiffusionConfig cfg{0.1, 0.002};
    const auto x = test_points()[0];
    SUBCASE("constant initial data") {
        const auto p = pointwise_solution(ObservableCombination(1.0), x, 0.5, cfg, 64, 1);
        CHECK(p.estimate == 1.0);
        CHECK(p.stderr_ == 0.0);
    }
    SUBCASE("linearity with shared paths") {
        const Observable f(GroupElement{}, 1.2), g(from_disk({0.3, 0.2}, 1.0), 1.0);
        ObservableCombination uf, ug, both;
        uf.add(1.0, f);
        ug.add(1.0, g);
        both.add(2.5, f);
        both.add(1.0, g);
        const auto pf = pointwise_solution(uf, x, 0.3, cfg, 4000, 9);
        const auto pg = pointwise_solution(ug, x, 0.3, cfg, 4000, 9);
        const auto pb = pointwise_solution(both, x, 0.3, cfg, 4000, 9);
        CHECK(pb.estimate == doctest::Approx(2.5 * pf.estimate + pg.estimate).epsilon(1e-13));
    }
    SUBCASE("short-time expansion") {
        const auto u = two_bumps();
        for (const auto& g : test_points()) {
            const double lu = lie_derivative(u, g, 0) - cfg.nu * laplacian(u, g);
            for (double t : {0.01, 0.02}) {
                const auto p = pointwise_solution(u, g, t, cfg, 200000, 5);
                const double expect = u(g) - t * lu;
                CHECK(std::abs(p.estimate - expect) <= 5.0 * t * t + 3.0 * p.stderr_);
            }
        }
    }
}

TEST_CASE("ensemble evolution") {
    const auto c = from_disk({0.0, 0.0}, std::numbers::pi / 5);
    auto ens = neighbourhood_ensemble(c, 0.3, 200, 4, {0.05, 0.02});
    for (const auto& g : ens.states) CHECK(surrogate_distance(c, g) <= 0.3 + 1e-12);
    const auto same = evolve_ensemble(ens, 0.0);
    CHECK(same.states == ens.states);
    CHECK_THROWS_AS(evolve_ensemble(ens, -1.0), ConfigError);
    CHECK_THROWS_AS(neighbourhood_ensemble(c, 0.0, 10, 1, {}), ConfigError);

    SUBCASE("worker count and segmentation do not change the result") {
        set_default_workers(1);
        const auto one = evolve_ensemble(ens, 1.0);
        set_default_workers(4);
        const auto four = evolve_ensemble(ens, 1.0);
        CHECK(one.states == four.states);
        const auto split = evolve_ensemble(evolve_ensemble(ens, 0.5), 1.0);
        for (std::size_t i = 0; i < one.states.size(); ++i) {
            CHECK(max_norm_distance(split.states[i], one.states[i]) <= 1e-9);
        }
        set_default_workers(1);
    }
    SUBCASE("mass conservation") {
        const Observable f(from_disk({0.1, 0.1}, 0.4), 1.3);
        auto u = sample_uniform(40000, 21);
        u.config = {0.1, 0.02};
        for (double t : {0.0, 1.0, 3.0}) {
            u = evolve_ensemble(std::move(u), t);
            std::vector<double> v;
            for (const auto& g : u.states) v.push_back(f(g));
            const auto me = mean_and_stderr(v);
            CHECK(std::abs(me.mean - f.mean()) <= 3.0 * me.stderr_);
        }
    }
}

TEST_CASE("l2 decay curve") {
    const std::vector<double> times{0.0, 0.5, 1.0, 2.0, 3.0};
    SUBCASE("constant initial data") {
        const auto c = l2_decay_curve(ObservableCombination(2.0), times, {0.1, 0.02}, 64, 2, 1);
        for (double v : c.values) CHECK(v == 0.0);
    }
    SUBCASE("transport alone is an isometry") {
        const auto u = two_bumps();
        const auto c = l2_decay_curve(u, times, {0.0, 0.02}, 8192, 2, 3);
        // All times estimate the same number; the z-scores against their weighted mean
        // should look standard normal.
        double sw = 0, swv = 0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            sw += 1 / (c.stderrs[k] * c.stderrs[k]);
            swv += c.values[k] / (c.stderrs[k] * c.stderrs[k]);
        }
        const double m = swv / sw;
        for (std::size_t k = 0; k < c.size(); ++k) CHECK(std::abs(c.values[k] - m) <= 3.5 * c.stderrs[k]);
    }
    SUBCASE("worker independence") {
        const auto u = two_bumps();
        set_default_workers(1);
        const auto a = l2_decay_curve(u, times, {0.05, 0.02}, 256, 2, 7);
        set_default_workers(3);
        const auto b = l2_decay_curve(u, times, {0.05, 0.02}, 256, 2, 7);
        set_default_workers(1);
        CHECK(a.values == b.values);
        CHECK(a.stderrs == b.stderrs);
    }
}

TEST_CASE("paired-path estimator against grid quadrature at t = 0") {
    const double t0[] = {0.0};
    std::uint64_t seed = 100;
    for (const auto& u : oracle::estimator_cases()) {
        const double mean = u.mean();
        const double exact = oracle::grid_integral([&](const GroupElement& g) {
            const double v = u(g) - mean;
            return v * v;
        }, 48, 20, 64);
        const auto c = l2_decay_curve(u, t0, {0.0, 0.02}, 100000, 2, seed++);
        MESSAGE("estimate " << c.values[0] << " oracle " << exact << " se " << c.stderrs[0]);
        CHECK(std::abs(c.values[0] - exact) <= 3.0 * c.stderrs[0]);
    }
}

TEST_CASE("correlation curve") {
    const Observable f(GroupElement{}, 1.4);
    ObservableCombination uf;
    uf.add(1.0, f);
    const std::vector<double> times{0.0, 1.0, 2.0};
    const auto c = correlation_curve(uf, ObservableCombination(1.0), times, 2000, 2);
    for (double v : c.values) CHECK(std::abs(v) <= 1e-15);
    const auto auto_c = correlation_curve(uf, uf, times, 2000, 2);
    const auto ens = sample_uniform(2000, 2);
    std::vector<double> fv;
    for (const auto& g : ens.states) fv.push_back(f(g));
    const double m = pairwise_sum(fv) / 2000.0;
    double cov = 0.0;
    for (double v : fv) cov += (v - m) * (v - m);
    CHECK(auto_c.values[0] == doctest::Approx(cov / 2000.0).epsilon(1e-10));
}
