#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "dlab/analysis/discrepancy.hpp"
#include "dlab/analysis/fit.hpp"
#include "dlab/analysis/lyapunov.hpp"
#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"
#include "dlab/hyperbolic/sampling.hpp"
#include "dlab/random.hpp"
#include "dlab/spectral/operator.hpp"
#include "dlab/spectral/sweeps.hpp"
#include "dlab/spectral/torus_map.hpp"

using namespace dlab;
using namespace dlab::analysis;

namespace {

DecayCurve exact_curve(double C, double beta, int power, int n = 25, double dt = 0.5) {
    DecayCurve c;
    c.power = power;
    for (int i = 0; i < n; ++i) {
        const double t = i * dt;
        c.times.push_back(t);
        c.values.push_back(std::pow(C * std::exp(-beta * t), power));
        c.stderrs.push_back(0.0);
    }
    return c;
}

DecayFit fit_with(double C, double k_exp, double nu) {
    DecayFit f;
    f.beta = 0.5;
    f.prefactor = C * std::pow(nu, -k_exp);
    return f;
}

}  // namespace

TEST_CASE("exponential fit on exact data") {
    for (int power : {1, 2}) {
        const auto c = exact_curve(2.0, 0.7, power);
        const auto f = fit_exponential(c, Window{0.0, 12.0});
        CHECK(f.beta == doctest::Approx(0.7).epsilon(1e-10));
        CHECK(f.prefactor == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(f.ci_lo <= 0.7);
        CHECK(f.ci_hi >= 0.7);
        CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exponential fit on constant data") {
    DecayCurve c;
    rng::Stream s(5, rng::StreamTag::Synthetic, 0);
    for (int i = 0; i < 20; ++i) {
        c.times.push_back(0.5 * i);
        c.values.push_back(1.0 + 0.01 * s.normal());
        c.stderrs.push_back(0.01);
    }
    const auto f = fit_exponential(c, Window{0.0, 9.5});
    CHECK(f.ci_lo <= 0.0);
    CHECK(f.ci_hi >= 0.0);
}

TEST_CASE("fit errors and window") {
    const auto c = exact_curve(1.0, 1.0, 1, 5);
    CHECK_THROWS_AS(fit_exponential(c, Window{0.0, 2.0}), FitError);
    CHECK_THROWS_AS(fit_exponential(exact_curve(1.0, 1.0, 1), Window{2.0, 1.0}), FitError);
    DecayCurve noisy = exact_curve(1.0, 0.5, 1, 30);
    for (std::size_t i = 0; i < noisy.size(); ++i) noisy.stderrs[i] = 1e-4;
    const auto w = default_window(noisy, 10.0);
    CHECK(w.t0 == doctest::Approx(2.0));  // first value <= 1/e
    CHECK(noisy.values[static_cast<std::size_t>(w.t1 / 0.5)] >= 1e-3);
    // Values within 2 sigma of zero are excluded and reported.
    noisy.values[20] = 1e-5;
    const auto f = fit_exponential(noisy, Window{2.0, 14.5});
    CHECK(f.excluded_times.size() == 1);
}

TEST_CASE("fit interval calibration") {
    // Rate 0.4 with 5% multiplicative noise: the 95% interval must cover the truth in at
    // least 93 of 100 independent trials.
    int covered = 0;
    for (int trial = 0; trial < 100; ++trial) {
        rng::Stream s(2024, rng::StreamTag::Synthetic, trial);
        DecayCurve c;
        for (int i = 0; i <= 20; ++i) {
            const double t = 0.5 * i;
            const double v = 3.0 * std::exp(-0.4 * t);
            c.times.push_back(t);
            c.values.push_back(v * (1.0 + 0.05 * s.normal()));
            c.stderrs.push_back(0.05 * v);
        }
        const auto f = fit_exponential(c, Window{0.0, 10.0}, 1000 + trial, 1000);
        if (f.ci_lo <= 0.4 && 0.4 <= f.ci_hi) ++covered;
    }
    MESSAGE("covered " << covered << " / 100");
    CHECK(covered >= 93);
}

TEST_CASE("prefactor exponent") {
    const std::vector<double> nus{1e-1, 1e-2, 1e-3, 1e-4};
    std::vector<DecayFit> power2, flat;
    for (double nu : nus) {
        power2.push_back(fit_with(1.0, 2.0, nu));
        flat.push_back(fit_with(3.0, 0.0, nu));
    }
    CHECK(prefactor_exponent(nus, power2).k_hat == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(prefactor_exponent(nus, flat).k_hat) <= 1e-12);
    CHECK_THROWS_AS(prefactor_exponent({1e-1, 1e-2, 1e-3}, {power2[0], power2[1], power2[2]}), ConfigError);
    power2[2].converged = false;
    CHECK(prefactor_exponent(nus, power2).partial);
}

TEST_CASE("map-engine rate sweep") {
    const auto map = spectral::TorusMap::perturbed_cat(0.05);
    const std::vector<double> nus{1e-1, 1e-2, 1e-3, 1e-4};
    std::vector<DecayFit> fits;
    for (double nu : nus) {
        const auto op = spectral::build_transfer_operator(map, nu, 12);
        const auto c = spectral::map_decay_curve(op, spectral::smooth_initial_condition(op.modes), 12);
        fits.push_back(fit_exponential(c, default_window(c)));
    }
    const auto sw = prefactor_exponent(nus, fits);
    CHECK(std::isfinite(sw.k_hat));
    CHECK(sw.k_hat >= 0.0);
    CHECK(sw.beta_floor > 0.0);
}

TEST_CASE("envelope checks") {
    SUBCASE("constant curve") {
        DecayCurve c;
        c.power = 2;
        for (int i = 0; i < 10; ++i) {
            c.times.push_back(i);
            c.values.push_back(0.0);
            c.stderrs.push_back(0.0);
        }
        const auto r = envelope_checks(c, 1e-2);
        CHECK(r.envelope_pass);
        CHECK(r.short_time_pass);
        CHECK(r.c_env_min == 1.0);
    }
    SUBCASE("pure diffusion negative control") {
        // Rate 4 pi^2 nu is slower than 1 / log(1/nu) once nu is small.
        const double nu = 1e-3;
        const double rate = 4 * std::numbers::pi * std::numbers::pi * nu;
        DecayCurve c;
        c.power = 1;
        for (int i = 0; i <= 40; ++i) {
            const double t = i * 5.0;
            c.times.push_back(t);
            c.values.push_back(std::exp(-rate * t));
            c.stderrs.push_back(0.0);
        }
        const auto r = envelope_checks(c, nu);
        CHECK_FALSE(r.envelope_pass);
        CHECK(r.short_time_pass);
        CHECK(r.c_env_min > 10.0);
    }
    SUBCASE("short-time growth is caught") {
        DecayCurve c;
        c.power = 1;
        c.times = {0.0, 0.5, 1.0};
        c.values = {1.0, 1.2, 0.9};
        c.stderrs = {0.0, 0.0, 0.0};
        CHECK_FALSE(envelope_checks(c, 1e-2).short_time_pass);
    }
    SUBCASE("exact initial value replaces a low estimate") {
        DecayCurve c;
        c.power = 2;
        c.times = {0.0, 0.5, 1.0};
        c.values = {0.8, 0.98, 0.97};
        c.stderrs = {0.02, 0.02, 0.02};
        CHECK_FALSE(envelope_checks(c, 1e-3).short_time_pass);
        CHECK(envelope_checks(c, 1e-3, 10.0, 1.0, 1.0, 1.0).short_time_pass);
    }
    CHECK_THROWS_AS(envelope_checks(exact_curve(1, 1, 1), 0.5), ConfigError);
}

TEST_CASE("Lyapunov exponents") {
    const auto bolza = lyapunov_bolza(40.0, 32, 3);
    CHECK(bolza.gamma == doctest::Approx(1.0).epsilon(0.01));
    CHECK(bolza.minimum <= bolza.gamma);
    CHECK(bolza.minimum > 0.0);

    // log of the expanding eigenvalue of [[2,1],[1,1]], root of x^2 - 3x + 1.
    const double cat = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    CHECK(cat == doctest::Approx(0.96242365).epsilon(1e-8));
    const auto e0 = lyapunov_map(spectral::TorusMap::perturbed_cat(0.0), 2000, 32, 3);
    CHECK(e0.gamma == doctest::Approx(cat).epsilon(0.01));
    const auto e5 = lyapunov_map(spectral::TorusMap::perturbed_cat(0.05), 2000, 32, 3);
    CHECK(std::abs(e5.gamma - cat) <= 0.1 * cat);
    CHECK(e5.gamma > 0.0);

    // Longer horizon: interval shrinks, estimates agree.
    const auto e5_long = lyapunov_map(spectral::TorusMap::perturbed_cat(0.05), 8000, 32, 4);
    CHECK(e5_long.ci_hi - e5_long.ci_lo < e5.ci_hi - e5.ci_lo);
    const double se = std::hypot(e5.stderr_, e5_long.stderr_);
    CHECK(std::abs(e5.gamma - e5_long.gamma) <= 1.96 * se);

    CHECK_THROWS_AS(lyapunov_bolza(10.0, 8, 1), ConfigError);
    CHECK_THROWS_AS(lyapunov_map(spectral::TorusMap::perturbed_cat(0.0), 100, 8, 1), ConfigError);
}

TEST_CASE("discrepancy") {
    const auto& dict = discrepancy_dictionary();
    REQUIRE(dict.observables.size() == 20);
    CHECK_THROWS_AS(discrepancy(std::vector<hyperbolic::GroupElement>{}, dict), ValidationError);

    SUBCASE("single point") {
        const auto x = hyperbolic::from_disk({0.1, 0.2}, 0.3);
        const std::vector<hyperbolic::GroupElement> one{x};
        const auto r = discrepancy(one, dict);
        double best = 0.0;
        for (std::size_t j = 0; j < 20; ++j) best = std::max(best, std::abs(dict.observables[j](x) - dict.integrals[j]));
        CHECK(r.value == doctest::Approx(best).epsilon(1e-14));
    }
    SUBCASE("uniform sample") {
        const auto ens = hyperbolic::sample_uniform(1000000, 77);
        const auto r = discrepancy(ens.states, dict);
        MESSAGE("uniform discrepancy " << r.value << " se " << r.stderr_);
        CHECK(r.value <= 3.0 * r.stderr_);
    }
}
