#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"
#include "dlab/hyperbolic/group_element.hpp"

using namespace dlab::hyperbolic;

namespace {

GroupElement random_element(std::mt19937_64& gen, double scale = 1.5) {
    std::normal_distribution<double> n;
    return exp_algebra({scale * n(gen), scale * n(gen), scale * n(gen)});
}

// 2x2 product written out independently of the class.
std::array<double, 4> raw_mul(const std::array<double, 4>& x, const std::array<double, 4>& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

}  // namespace

TEST_CASE("canonical sign and renormalization") {
    const auto g = GroupElement::from_entries(-2.0, -1.0, -1.0, -1.0);
    CHECK(g.a() == 2.0);
    CHECK(g.d() == 1.0);
    const auto h = GroupElement::from_entries(0.0, -3.0, 3.0, 0.0);
    CHECK(h.b() == doctest::Approx(1.0));
    CHECK(h.c() == doctest::Approx(-1.0));
    CHECK(std::abs(h.det() - 1.0) < 1e-15);
    CHECK_THROWS_AS(GroupElement::from_entries(1, 2, 3, 4), dlab::DomainError);
    CHECK_THROWS_AS(GroupElement::from_entries(NAN, 0, 0, 1), dlab::DomainError);
}

TEST_CASE("determinant stays within 1e-12 along long products") {
    std::mt19937_64 gen(7);
    GroupElement g;
    // Entries grow to ~1e3 over the walk.
    for (int i = 0; i < 300; ++i) {
        g = g * random_element(gen, 0.1);
        CHECK(std::abs(g.det() - 1.0) <= 1e-12);
    }
}

TEST_CASE("product matches raw matrix arithmetic up to sign") {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 100; ++i) {
        const auto g = random_element(gen);
        const auto h = random_element(gen);
        const auto p = raw_mul({g.a(), g.b(), g.c(), g.d()}, {h.a(), h.b(), h.c(), h.d()});
        const auto gh = g * h;
        const double sgn = (gh.a() * p[0] + gh.b() * p[1] + gh.c() * p[2] + gh.d() * p[3]) > 0 ? 1.0 : -1.0;
        CHECK(std::abs(gh.a() - sgn * p[0]) < 1e-12 * (1 + std::abs(p[0])));
        CHECK(std::abs(gh.c() - sgn * p[2]) < 1e-12 * (1 + std::abs(p[2])));
    }
}

TEST_CASE("exp and log are mutually inverse") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        LieVector y{u(gen), u(gen), u(gen)};
        const double scale = std::pow(10.0, -6.0 * (u(gen) + 1.0) / 2.0) * 1.5;
        for (auto& v : y) v *= scale;
        const auto back = log_group(exp_algebra(y));
        for (int k = 0; k < 3; ++k) CHECK(std::abs(back[k] - y[k]) < 1e-12);
    }
    // Pure rotation near angle pi: log still recovers it.
    const auto r = log_group(rotation(3.0));
    CHECK(r[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("exp of a diagonal generator is the geodesic flow") {
    const auto g = exp_algebra({0.8, 0.0, 0.0});
    CHECK(max_norm_distance(g, geodesic_flow(GroupElement{}, 0.8)) < 1e-15);
    CHECK(g.a() == doctest::Approx(std::exp(0.4)));
}

TEST_CASE("flow group property") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> t(-5.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto g = random_element(gen, 0.7);
        const double s = t(gen), r = t(gen);
        worst = std::max(worst, max_norm_distance(geodesic_flow(geodesic_flow(g, r), s), geodesic_flow(g, r + s)));
    }
    CHECK(worst <= 1e-12);
    CHECK(geodesic_flow(GroupElement{}, 0.0) == GroupElement{});
}

TEST_CASE("geodesic through the disk centre") {
    for (double t : {0.1, 1.0, 2.5, 6.0}) {
        const auto p = to_disk(geodesic_flow(GroupElement{}, t));
        CHECK(p.z.real() == doctest::Approx(std::tanh(t / 2)).epsilon(1e-14));
        CHECK(std::abs(p.z.imag()) < 1e-15);
        CHECK(p.theta == doctest::Approx(0.0));
    }
}

TEST_CASE("mobius action") {
    const Complex z(0.3, 0.1);
    CHECK(std::abs(mobius_apply(GroupElement{}, z, Model::Disk) - z) < 1e-16);
    const auto a = geodesic_flow(GroupElement{}, std::log(2.0));
    CHECK(std::abs(mobius_apply(a, {0.0, 1.0}, Model::HalfPlane) - Complex(0.0, 2.0)) < 1e-15);
    CHECK_THROWS_AS(mobius_apply(a, {0.0, 1.0}, Model::Disk), dlab::DomainError);
    CHECK_THROWS_AS(mobius_apply(a, {0.0, -1.0}, Model::HalfPlane), dlab::DomainError);

    // Disk action agrees with conjugating the half-plane action by the Cayley map.
    std::mt19937_64 gen(2);
    for (int i = 0; i < 50; ++i) {
        const auto g = random_element(gen);
        const Complex w(0.4 * i / 50.0 - 0.2, 0.5 + i / 50.0);
        const Complex zd = (w - Complex(0, 1)) / (w + Complex(0, 1));
        const Complex wg = (g.a() * w + g.b()) / (g.c() * w + g.d());
        const Complex expect = (wg - Complex(0, 1)) / (wg + Complex(0, 1));
        CHECK(std::abs(mobius_apply(g, zd, Model::Disk) - expect) < 1e-12);
    }
}

TEST_CASE("disk view round trip") {
    std::mt19937_64 gen(9);
    for (int i = 0; i < 200; ++i) {
        const auto g = random_element(gen, 0.8);
        const auto p = to_disk(g);
        CHECK(std::abs(p.z) < 1.0);
        CHECK(max_norm_distance(from_disk(p.z, p.theta), g) < 1e-10);
        CHECK(std::abs(p.z - mobius_apply(g, {}, Model::Disk)) < 1e-12);
    }
    const auto r = to_disk(rotation(std::numbers::pi / 5));
    CHECK(r.theta == doctest::Approx(std::numbers::pi / 5));
    CHECK_THROWS_AS(from_disk({1.0, 0.0}, 0.0), dlab::DomainError);
}

TEST_CASE("surrogate distance bounds the base distance") {
    std::mt19937_64 gen(13);
    for (int i = 0; i < 500; ++i) {
        const auto g = random_element(gen, 0.5);
        const auto h = random_element(gen, 0.5);
        CHECK(surrogate_distance(g, h) >= base_distance(g, h) - 1e-12);
    }
    const auto a = geodesic_flow(GroupElement{}, 1.3);
    CHECK(surrogate_distance(GroupElement{}, a) == doctest::Approx(1.3));
    CHECK(base_distance(GroupElement{}, a) == doctest::Approx(1.3));
    CHECK(surrogate_distance(GroupElement{}, rotation(0.7)) == doctest::Approx(0.7));
    CHECK(base_distance(GroupElement{}, rotation(0.7)) == doctest::Approx(0.0));
}
