#pragma once

#include <array>
#include <vector>

#include "dlab/hyperbolic/group_element.hpp"

namespace dlab::hyperbolic {

/// Surface group given by generators (g0..g3 followed by their inverses) and one relation.
struct FuchsianGroup {
    std::array<GroupElement, 8> generators;
    // Indices into `generators`; the left-to-right product is +-identity.
    std::vector<int> relation;
    double systole = 0.0;
};

struct SidePairing {
    int generator = 0;    // maps this side onto the paired side
    int paired_side = 0;
};

/// Regular octagon centred at the disk origin. Side j lies on the geodesic whose outward
/// normal points at angle j*pi/4; vertex j sits at angle pi/8 + j*pi/4.
struct FundamentalDomain {
    std::array<Complex, 8> vertices;
    std::array<SidePairing, 8> pairing;
    double containment_tol = 1e-9;
    double inradius = 0.0;       // hyperbolic
    double circumradius = 0.0;   // hyperbolic
    double area = 0.0;

    // Euclidean data of side j's geodesic: a circle orthogonal to the unit circle with
    // centre side_centre * e^{i j pi/4} and radius side_radius.
    double side_centre = 0.0;
    double side_radius = 0.0;

    // Euclidean distance from 0 to the boundary along the ray at angle alpha.
    double boundary_radius(double alpha) const noexcept;
    bool contains_disk_point(Complex z) const noexcept;
};

struct BolzaSurface {
    FuchsianGroup group;
    FundamentalDomain domain;
};

// Built once and self-checked (relation word, hyperbolicity, area); throws ConsistencyError
// if a check fails. The returned reference is shared and immutable.
const BolzaSurface& bolza_group();

// Product of generators read left to right.
GroupElement word_product(const FuchsianGroup& group, const std::vector<int>& word);

struct Reduction {
    GroupElement element;
    std::vector<int> witness;  // word_product(group, witness) * input == element
};

// Dirichlet containment: no generator moves the base point closer to the centre.
bool in_domain(const GroupElement& g, const FuchsianGroup& group, const FundamentalDomain& domain) noexcept;

// Greedy descent: repeatedly left-multiply by the generator that brings the base point
// closest to the centre. Throws ReductionError after 1000 iterations.
Reduction reduce_to_domain(const GroupElement& g, const FuchsianGroup& group, const FundamentalDomain& domain);
GroupElement reduce(const GroupElement& g);

}  // namespace dlab::hyperbolic
