#include "dlab/spectral/contour.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>

#include "dlab/errors.hpp"
#include "dlab/numerics.hpp"

namespace dlab::spectral {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

std::vector<std::vector<int>> blocks_of(const Eigen::MatrixXcd& P) {
    const int n = static_cast<int>(P.rows());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i != j && P(i, j) != cplx(0.0, 0.0)) {
                const int a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::map<int, std::vector<int>> g;
    for (int i = 0; i < n; ++i) g[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& [r, idx] : g) out.push_back(std::move(idx));
    return out;
}

Eigen::MatrixXcd gather(const Eigen::MatrixXcd& m, const std::vector<int>& idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd out(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < k; ++i) out(i, j) = m(idx[i], idx[j]);
    }
    return out;
}

// Spectral norm by power iteration on R^H R. `v` carries the previous node's singular
// vector, so neighbouring nodes converge in a few steps.
double spectral_norm(const Eigen::MatrixXcd& r, Eigen::VectorXcd& v) {
    if (v.size() != r.cols()) v = Eigen::VectorXcd::Ones(r.cols()) / std::sqrt(static_cast<double>(r.cols()));
    double est = 0.0;
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXcd w = r.adjoint() * (r * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        const double next = std::sqrt(nw);
        v = w / nw;
        if (std::abs(next - est) <= 1e-8 * next) return next;
        est = next;
    }
    return est;
}

using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Inverse of (T - lambda) for upper-triangular T by back substitution, column by column.
// Returns false on an exactly singular diagonal.
bool shifted_triangular_inverse(const RowMatrix& T, cplx lambda, Eigen::MatrixXcd& x) {
    const Eigen::Index m = T.rows();
    x.setZero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const cplx djj = T(j, j) - lambda;
        if (djj == cplx(0.0, 0.0)) return false;
        x(j, j) = 1.0 / djj;
        for (Eigen::Index i = j - 1; i >= 0; --i) {
            const cplx sum = (T.row(i).segment(i + 1, j - i) * x.col(j).segment(i + 1, j - i)).value();
            x(i, j) = -sum / (T(i, i) - lambda);
        }
    }
    return x.allFinite();
}

// Index flip i -> n-1-i maps the Fourier mode k to -k; a generator with real coefficients in
// physical space satisfies P = J conj(P) J for it. Real matrices satisfy it with J = 1.
enum class Mirror { None, Identity, Flip };

Mirror conjugation_mirror(const Eigen::MatrixXcd& P) {
    const auto n = P.rows();
    const double tol = 1e-14 * std::max(1.0, P.cwiseAbs().maxCoeff());
    if ((P.imag().cwiseAbs().maxCoeff()) <= tol) return Mirror::Identity;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(P(n - 1 - i, n - 1 - j) - std::conj(P(i, j))) > tol) return Mirror::None;
        }
    }
    return Mirror::Flip;
}

struct Node {
    cplx lambda;
    cplx weight;  // d lambda / du times the orientation sign
    bool segment;
};

}  // namespace

double Contour::corner_mismatch() const noexcept {
    const double h = height();
    return std::max(std::abs(segment(h) - upper_ray(0.0)), std::abs(segment(-h) - lower_ray(0.0)));
}

Eigen::MatrixXcd semigroup_dense(const Eigen::MatrixXcd& P, double t) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(P.rows(), P.cols());
    for (const auto& b : blocks_of(P)) {
        const Eigen::MatrixXcd e = (gather(P, b) * (-t)).exp();
        for (std::size_t j = 0; j < b.size(); ++j) {
            for (std::size_t i = 0; i < b.size(); ++i) out(b[i], b[j]) = e(i, j);
        }
    }
    return out;
}

ContourCheckResult semigroup_contour_check(const Eigen::MatrixXcd& P, double t, const Contour& contour,
                                           const QuadratureSpec& quad, const Eigen::MatrixXcd& residue) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("t", "contour check needs t > 0");
    if (!(contour.nu > 0.0)) throw ConfigError("nu", "contour needs nu > 0");
    if (P.rows() != P.cols() || P.rows() == 0) throw ConfigError("P", "square non-empty matrix required");
    const auto blocks = blocks_of(P);
    // Each block is reduced once to Schur form P_b = U T U^H; the quadrature then only needs
    // triangular inverses, and the resolvent norm is unitarily invariant.
    std::vector<RowMatrix> tri;
    std::vector<Eigen::MatrixXcd> unitary, acc;
    std::vector<Eigen::VectorXcd> warm(blocks.size());
    // With a conjugation symmetry only the upper half of the contour is integrated; the lower
    // half is its mirror image.
    const Mirror mirror = conjugation_mirror(P);
    const bool half = mirror != Mirror::None;
    for (const auto& b : blocks) {
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(gather(P, b));
        if (schur.info() != Eigen::Success) throw NumericalError("Schur reduction failed");
        tri.push_back(schur.matrixT());
        unitary.push_back(schur.matrixU());
        acc.push_back(Eigen::MatrixXcd::Zero(tri.back().rows(), tri.back().cols()));
    }

    const double H = contour.height();
    // Double-exponential maps: tanh-sinh onto the segment, exp-sinh onto each ray.
    auto segment_node = [&](double u) {
        const double sh = kHalfPi * std::sinh(u);
        const double ch = std::cosh(sh);
        const double tau = H * std::tanh(sh);
        const double dtau = H * kHalfPi * std::cosh(u) / (ch * ch);
        return Node{contour.segment(tau), cplx(0.0, dtau), true};
    };
    auto ray_node = [&](double u, bool upper) {
        const double s = std::exp(kHalfPi * std::sinh(u));
        const double ds = s * kHalfPi * std::cosh(u);
        if (upper) return Node{contour.upper_ray(s), cplx(1.0, 1.0) * ds, false};
        // Lower ray is traversed inward.
        return Node{contour.lower_ray(s), -cplx(1.0, -1.0) * ds, false};
    };
    auto node_at = [&](int piece, double u) { return piece == 0 ? segment_node(u) : ray_node(u, piece == 1); };

    ContourCheckResult out;
    // Adds w * e^{-lambda t} (P - lambda)^{-1} blockwise; returns the node's tail-size bound.
    Eigen::MatrixXcd inv;
    auto add_node = [&](const Node& node, double w) {
        const cplx f = std::exp(-node.lambda * t) * node.weight * w;
        double norm = 0.0;
        for (std::size_t k = 0; k < tri.size(); ++k) {
            if (!shifted_triangular_inverse(tri[k], node.lambda, inv)) {
                norm = std::numeric_limits<double>::infinity();
                break;
            }
            norm = std::max(norm, spectral_norm(inv, warm[k]));
            acc[k] += f * inv;
        }
        if (!(norm <= 1.0 / quad.placement_tol)) {
            throw ContourPlacementError("contour passes through the spectrum: resolvent norm " + std::to_string(norm) +
                                        " at a quadrature node");
        }
        out.samples.push_back({node.lambda, norm, node.segment});
        if (half && node.lambda.imag() > 0.0) out.samples.push_back({std::conj(node.lambda), norm, node.segment});
        if (node.segment) out.max_segment_resolvent = std::max(out.max_segment_resolvent, norm);
        return std::abs(std::exp(-node.lambda * t)) * norm * std::abs(node.weight);
    };

    constexpr double kSegU = 3.2;    // tanh-sinh weights are below 1e-40 beyond this
    constexpr double kRayLo = -4.5;  // exp-sinh: s < 1e-36 below this
    // Starting steps: about four segment nodes per oscillation of e^{-i t Im l}; the rays
    // oscillate at the same frequency but decay like e^{-t s}.
    const double h0 = std::min(0.5, 1.0 / (H * t));
    const double h0_ray = std::min(0.25, 0.05 / t);

    // Piece ranges [lo, lo + count * h]; the ray cut-off is fixed on the coarsest level.
    struct Piece {
        double lo = 0.0, h = 0.0;
        long long count = 0;
    };
    std::array<Piece, 3> pieces;
    {
        const long long m = 2 * static_cast<long long>(std::ceil(kSegU / h0));
        pieces[0] = {-kSegU, 2.0 * kSegU / static_cast<double>(m), m};
        for (long long j = half ? m / 2 : 0; j <= m; ++j) {
            add_node(node_at(0, pieces[0].lo + j * pieces[0].h), (half && 2 * j == m ? 0.5 : 1.0) * pieces[0].h);
        }
        for (int p : {1, 2}) {
            if (half && p == 2) break;
            long long j = 0;
            for (;; ++j) {
                const double u = kRayLo + j * h0_ray;
                const double size = add_node(node_at(p, u), h0_ray);
                if (u > 0.0 && size < quad.truncation) break;
                if (u > 6.0) throw NumericalError("contour ray truncation did not settle");
            }
            pieces[p] = {kRayLo, h0_ray, j};
        }
    }
    auto assemble = [&]() {
        Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(P.rows(), P.cols());
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto& b = blocks[k];
            const Eigen::MatrixXcd back = unitary[k] * acc[k] * unitary[k].adjoint();
            for (std::size_t j = 0; j < b.size(); ++j) {
                for (std::size_t i = 0; i < b.size(); ++i) full(b[i], b[j]) = back(i, j);
            }
        }
        full /= cplx(0.0, 2.0 * std::numbers::pi);
        if (mirror == Mirror::Identity) full += full.conjugate().eval();
        if (mirror == Mirror::Flip) full += full.reverse().conjugate().eval();
        return full;
    };

    Eigen::MatrixXcd prev = assemble();
    Eigen::MatrixXcd cur;
    int level = 1;
    for (;; ++level) {
        if (level > quad.max_levels) throw NumericalError("contour quadrature did not converge");
        // Halving: the old sum keeps its nodes at half weight, new midpoints enter at the new step.
        for (auto& a : acc) a *= 0.5;
        for (int p = 0; p < (half ? 2 : 3); ++p) {
            auto& pc = pieces[p];
            pc.h *= 0.5;
            pc.count *= 2;
            const long long first = (half && p == 0) ? pc.count / 2 + 1 : 1;
            for (long long j = first; j < pc.count; j += 2) add_node(node_at(p, pc.lo + j * pc.h), pc.h);
        }
        cur = assemble();
        if ((cur - prev).cwiseAbs().maxCoeff() <= quad.refinement_tol) break;
        prev = std::move(cur);
    }
    out.levels = level;
    out.mirrored = half;
    out.nodes_used = out.samples.size();
    if (residue.size() != 0) cur += residue;
    out.contour_value = cur;
    out.dense_value = semigroup_dense(P, t);
    out.max_deviation = (out.contour_value - out.dense_value).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace dlab::spectral
