#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "transfer_oracle.hpp"
#include "dlab/errors.hpp"
#include "dlab/spectral/contour.hpp"
#include "dlab/spectral/operator.hpp"
#include "dlab/spectral/spectrum.hpp"
#include "dlab/spectral/torus_map.hpp"

using namespace dlab::spectral;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double heat(double nu, int k1, int k2) { return std::exp(-2.0 * kTwoPi * std::numbers::pi * nu * (k1 * k1 + k2 * k2)); }

}  // namespace

TEST_CASE("torus map validation") {
    const auto t = TorusMap::perturbed_cat(0.05);
    CHECK(t.cone_ratio() < 1.0);
    CHECK(t.perturbation_norm() < t.diffeo_bound());
    CHECK(t.linear_lyapunov() == doctest::Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)));
    CHECK_THROWS_AS(TorusMap({2, 1, 1, 2}, 0.0, {}), dlab::ValidationError);
    CHECK_THROWS_AS(TorusMap({1, 1, 0, 1}, 0.0, {}), dlab::ValidationError);
    CHECK_THROWS_AS(TorusMap::perturbed_cat(2.0), dlab::ValidationError);
    // Not area preserving: x1 += eps sin(2 pi x1).
    CHECK_THROWS_AS(TorusMap({2, 1, 1, 1}, 0.01, {TrigTerm{0, 1, 0, 1.0, 0.0}}), dlab::ValidationError);
}

TEST_CASE("unperturbed cat map operator entries") {
    const double nu = 1e-3;
    const int N = 6;
    const auto op = build_transfer_operator(TorusMap::perturbed_cat(0.0), nu, N);
    const auto& L = op.modes;
    CHECK(op.matrix(L.zero(), L.zero()) == cplx(1.0, 0.0));
    const int row = L.index(1, 0);
    for (int m = 0; m < L.size(); ++m) {
        const cplx v = op.matrix(row, m);
        if (m == L.index(1, -1)) {
            CHECK(std::abs(v - heat(nu, 1, 0)) < 1e-14);
        } else {
            CHECK(std::abs(v) < 1e-14);
        }
    }
    // Nonzero modes: every orbit leaves the truncation, so the block is nilpotent.
    std::vector<int> idx;
    for (int i = 0; i < L.size(); ++i) {
        if (i != L.zero()) idx.push_back(i);
    }
    const Eigen::MatrixXcd B = submatrix(op.matrix, idx);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(B.rows(), B.cols());
    for (int k = 0; k < N * N; ++k) p = p * B;
    CHECK(p.cwiseAbs().maxCoeff() < 1e-12);
    const auto s = spectrum_and_gap(op);
    CHECK(s.invariant == cplx(1.0, 0.0));
    CHECK(s.invariant_multiplicity == 1);
    CHECK(s.max_modulus <= 1.0 + 1e-10);
}

TEST_CASE("aliasing guard") {
    const auto map = TorusMap::perturbed_cat(0.05);
    CHECK_THROWS_AS(build_transfer_operator(map, 1e-3, 8, required_grid(map, 8) - 1), dlab::ConfigError);
    CHECK_THROWS_AS(build_transfer_operator(map, 1e-3, 3), dlab::ConfigError);
    CHECK(required_grid(map, 8) >= 64);
}

TEST_CASE("perturbed transfer operator matches fine-grid composition") {
    const auto map = TorusMap::perturbed_cat(0.05);
    const double nu = 1e-3;
    const int N = 8, band = 4;
    const auto op = build_transfer_operator(map, nu, N);
    const auto& L = op.modes;
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(L.size());
    for (int k1 = -band; k1 <= band; ++k1) {
        for (int k2 = -band; k2 <= band; ++k2) u(L.index(k1, k2)) = cplx(gauss(rng), gauss(rng));
    }
    const Eigen::VectorXcd got = op.matrix * u;

    const Eigen::VectorXcd expect = oracle::composition_oracle(map, nu, L, u, band, 16 * 8 * N);
    const double rel = (got - expect).norm() / expect.norm();
    MESSAGE("relative error " << rel);
    CHECK(rel <= 1e-8);
}

TEST_CASE("transfer operator contraction and conjugation symmetry") {
    const auto op = build_transfer_operator(TorusMap::perturbed_cat(0.05), 1e-2, 8);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.matrix);
    CHECK(svd.singularValues()(0) <= 1.0 + 1e-10);
    const auto s = spectrum_and_gap(op);
    CHECK(std::abs(s.invariant - 1.0) < 1e-12);
    CHECK(s.invariant_multiplicity == 1);
    CHECK(s.conjugation_error <= 1e-8);
    CHECK(s.gap > 0.0);
    // Arnoldi agrees with the dense gap.
    CHECK(dominant_gap(op) == doctest::Approx(s.gap).epsilon(1e-8));
}

TEST_CASE("generator: diffusion only and numerical range") {
    const double nu = 0.01;
    const auto op = build_advection_diffusion_generator(VelocityField{}, nu, 5);
    const auto s = spectrum_and_gap(op);
    const double unit = 2.0 * kTwoPi * std::numbers::pi * nu;
    CHECK(std::abs(s.gap - unit) < 1e-12);
    for (int i = 0; i < op.modes.size(); ++i) {
        const int k1 = op.modes.k1(i), k2 = op.modes.k2(i);
        CHECK(op.matrix(i, i).real() == doctest::Approx(unit * (k1 * k1 + k2 * k2)));
    }

    VelocityField cells{{TrigTerm{0, 0, 1, 1.0, 0.0}, TrigTerm{1, 1, 0, 1.0, 0.0},
                         TrigTerm{0, 1, 1, 0.3, 0.0}, TrigTerm{1, 1, 1, -0.3, 0.0}}};
    for (const auto& v : {shear_flow(), cells}) {
        const auto g = build_advection_diffusion_generator(v, 1e-3, 8);
        std::mt19937_64 rng(3);
        std::normal_distribution<double> gauss;
        double worst = 1.0;
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXcd u(g.matrix.rows());
            for (auto& c : u) c = cplx(gauss(rng), gauss(rng));
            worst = std::min(worst, u.dot(g.matrix * u).real() / u.squaredNorm());
        }
        CHECK(worst >= -1e-12);
        CHECK(spectrum_and_gap(g).min_real_part >= -1e-10);
    }
    CHECK_THROWS_AS(build_advection_diffusion_generator(VelocityField{{TrigTerm{0, 1, 0, 1.0, 0.0}}}, 0.01, 5),
                    dlab::ValidationError);
}

TEST_CASE("assignment and matching") {
    const std::vector<std::vector<double>> cost{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
    const auto a = min_cost_assignment(cost);
    CHECK(cost[0][a[0]] + cost[1][a[1]] + cost[2][a[2]] == doctest::Approx(5.0));
    const std::vector<cplx> x{{1, 0}, {0.5, 0.2}, {0.5, -0.2}};
    const std::vector<cplx> y{{0.5, -0.21}, {1, 0}, {0.5, 0.21}};
    int unmatched = -1;
    CHECK(matched_displacement(x, y, &unmatched) == doctest::Approx(0.01));
    CHECK(unmatched == 0);
}

TEST_CASE("contour: diagonal matrix") {
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(2, 2);
    P(0, 0) = 1.0;
    P(1, 1) = 2.0;
    const Contour c{0.5, 1.0};
    CHECK(c.corner_mismatch() == 0.0);
    for (double t : {0.5, 1.0, 2.0}) {
        const auto r = semigroup_contour_check(P, t, c);
        CHECK(std::abs(r.contour_value(0, 0) - std::exp(-t)) <= 1e-8);
        CHECK(std::abs(r.contour_value(1, 1) - std::exp(-2.0 * t)) <= 1e-8);
        CHECK(r.max_deviation <= 1e-8);
    }
    CHECK_THROWS_AS(semigroup_contour_check(P, 1.0, Contour{1.0, 1.0}), dlab::ContourPlacementError);
    CHECK_THROWS_AS(semigroup_contour_check(P, 0.0, c), dlab::ConfigError);
}

TEST_CASE("contour: random matrix with a zero eigenvalue") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double beta = 0.4;
    Eigen::MatrixXcd S(8, 8);
    for (auto& s : S.reshaped()) s = cplx(unif(rng), unif(rng));
    S += 3.0 * Eigen::MatrixXcd::Identity(8, 8);
    Eigen::VectorXcd d(8);
    d(0) = 0.0;
    for (int i = 1; i < 8; ++i) d(i) = cplx(beta + 0.5 + 1.5 * (unif(rng) + 1.0), 1.2 * unif(rng));
    const Eigen::MatrixXcd Si = S.inverse();
    const Eigen::MatrixXcd P = S * d.asDiagonal() * Si;
    const Eigen::MatrixXcd proj = S.col(0) * Si.row(0);
    for (double t : {0.5, 1.0, 2.0}) {
        const auto r = semigroup_contour_check(P, t, Contour{beta, 1.0}, {}, proj);
        MESSAGE("t = " << t << " deviation " << r.max_deviation);
        CHECK(r.max_deviation <= 1e-6);
        // Independent closed form from the eigendecomposition.
        const Eigen::MatrixXcd closed = S * d.unaryExpr([&](cplx z) { return std::exp(-z * t); }).asDiagonal() * Si;
        CHECK((r.dense_value - closed).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("contour: shear advection-diffusion generator") {
    const double nu = 0.05;
    const auto op = build_advection_diffusion_generator(shear_flow(), nu, 16);
    const auto& L = op.modes;
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(L.size(), L.size());
    proj(L.zero(), L.zero()) = 1.0;
    const auto start = std::chrono::steady_clock::now();
    const auto r = semigroup_contour_check(op.matrix, 1.0, Contour{1.0, nu}, {}, proj);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    MESSAGE("deviation " << r.max_deviation << " nodes " << r.nodes_used << " levels " << r.levels << " in "
                         << secs << " s");
    CHECK(r.max_deviation <= 1e-6);
    CHECK(std::isfinite(r.max_segment_resolvent));
    CHECK(r.max_segment_resolvent > 0.0);
}
