#include "dlab/hyperbolic/bolza.hpp"

#include <cmath>
#include <numbers>

#include "dlab/errors.hpp"
#include "dlab/numerics.hpp"

namespace dlab::hyperbolic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxReductionSteps = 1000;

double sector_area(const FundamentalDomain& dom) {
    // Area element 4r dr da / (1-r^2)^2 integrates radially to 2R^2 / (1-R^2).
    std::vector<double> x, w;
    gauss_legendre(48, x, w);
    const double half = kPi / 16.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = dom.boundary_radius(half * (x[i] + 1.0));
        acc += w[i] * 2.0 * r * r / (1.0 - r * r);
    }
    return 16.0 * half * acc;
}

BolzaSurface build() {
    BolzaSurface s;
    const double sqrt2 = std::numbers::sqrt2;
    const double ell = 2.0 * std::acosh(1.0 + sqrt2);

    auto& gens = s.group.generators;
    const GroupElement translation = geodesic_flow(GroupElement{}, ell);
    for (int k = 0; k < 4; ++k) {
        gens[k] = rotation(k * kPi / 4) * translation * rotation(-k * kPi / 4);
        gens[k + 4] = gens[k].inverse();
    }
    s.group.relation = {0, 5, 2, 7, 4, 1, 6, 3};
    s.group.systole = ell;

    auto& dom = s.domain;
    const double in_euclid = std::sqrt(sqrt2 - 1.0);
    dom.side_centre = 0.5 * (in_euclid + 1.0 / in_euclid);
    dom.side_radius = 0.5 * (1.0 / in_euclid - in_euclid);
    dom.inradius = std::acosh(1.0 + sqrt2);
    dom.circumradius = std::acosh(3.0 + 2.0 * sqrt2);
    const double vertex_r = std::tanh(0.5 * dom.circumradius);
    for (int j = 0; j < 8; ++j) {
        dom.vertices[j] = std::polar(vertex_r, kPi / 8 + j * kPi / 4);
        dom.pairing[j] = {(j + 4) % 8, (j + 4) % 8};
    }
    dom.area = sector_area(dom);

    for (const auto& g : gens) {
        if (!(std::abs(g.trace()) > 2.0)) throw ConsistencyError("Bolza generator is not hyperbolic");
    }
    const GroupElement rel = word_product(s.group, s.group.relation);
    if (max_norm_distance(rel, GroupElement{}) > 1e-10) {
        throw ConsistencyError("Bolza relation word does not evaluate to the identity");
    }
    if (std::abs(dom.area - 4.0 * kPi) > 1e-6) throw ConsistencyError("octagon area differs from 4 pi");
    for (int j = 0; j < 8; ++j) {
        const Complex far = mobius_apply(gens[j], {}, Model::Disk);
        if (std::abs(std::abs(far) - std::tanh(dom.inradius)) > 1e-12) {
            throw ConsistencyError("generator does not translate the centre by twice the inradius");
        }
    }
    return s;
}

}  // namespace

double FundamentalDomain::boundary_radius(double alpha) const noexcept {
    const double sector = kPi / 4;
    double rel = std::remainder(alpha, sector);
    const double c = side_centre * std::cos(rel);
    return c - std::sqrt(c * c - 1.0);
}

bool FundamentalDomain::contains_disk_point(Complex z) const noexcept {
    for (int j = 0; j < 8; ++j) {
        if (std::abs(z - std::polar(side_centre, j * kPi / 4)) < side_radius) return false;
    }
    return std::abs(z) < 1.0;
}

const BolzaSurface& bolza_group() {
    static const BolzaSurface surface = build();
    return surface;
}

GroupElement word_product(const FuchsianGroup& group, const std::vector<int>& word) {
    GroupElement g;
    for (int i : word) g = g * group.generators.at(i);
    return g;
}

bool in_domain(const GroupElement& g, const FuchsianGroup& group, const FundamentalDomain& domain) noexcept {
    const double n0 = g.frobenius_sq();
    for (const auto& h : group.generators) {
        if ((h * g).frobenius_sq() < n0 - domain.containment_tol) return false;
    }
    return true;
}

Reduction reduce_to_domain(const GroupElement& g, const FuchsianGroup& group, const FundamentalDomain& domain) {
    Reduction out{g, {}};
    std::vector<int> applied;
    for (int iter = 0; iter < kMaxReductionSteps; ++iter) {
        const double n0 = out.element.frobenius_sq();
        int best = -1;
        double best_norm = n0 - domain.containment_tol;
        GroupElement best_g;
        for (int j = 0; j < 8; ++j) {
            const GroupElement cand = group.generators[j] * out.element;
            const double n = cand.frobenius_sq();
            if (n < best_norm) {
                best_norm = n;
                best = j;
                best_g = cand;
            }
        }
        if (best < 0) {
            out.witness.assign(applied.rbegin(), applied.rend());
            return out;
        }
        out.element = best_g;
        applied.push_back(best);
    }
    throw ReductionError("fundamental-domain reduction did not terminate");
}

GroupElement reduce(const GroupElement& g) {
    const auto& s = bolza_group();
    return reduce_to_domain(g, s.group, s.domain).element;
}

}  // namespace dlab::hyperbolic
