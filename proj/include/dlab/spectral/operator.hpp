#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "dlab/spectral/torus_map.hpp"

namespace dlab::spectral {

using cplx = std::complex<double>;

/// Fourier modes k = (k1, k2) with |k|_inf <= N, index (k1 + N)(2N + 1) + (k2 + N).
struct ModeLattice {
    int N = 0;

    int side() const noexcept { return 2 * N + 1; }
    int size() const noexcept { return side() * side(); }
    int index(int k1, int k2) const noexcept { return (k1 + N) * side() + (k2 + N); }
    int k1(int i) const noexcept { return i / side() - N; }
    int k2(int i) const noexcept { return i % side() - N; }
    bool contains(int k1, int k2) const noexcept { return std::abs(k1) <= N && std::abs(k2) <= N; }
    int zero() const noexcept { return index(0, 0); }
};

enum class OperatorKind { Transfer, Generator };

/// Dense Galerkin matrix on the mode lattice. Transfer kind: one step of
/// L_nu = e^{nu Delta} o (composition with T). Generator kind: P_nu = v.grad - nu Delta,
/// so that e^{-t P_nu} solves d_t u + v.grad u = nu Delta u.
struct TruncatedOperator {
    ModeLattice modes;
    OperatorKind kind = OperatorKind::Transfer;
    double nu = 0.0;
    Eigen::MatrixXcd matrix;
};

// Smallest FFT grid per axis that keeps the requested truncation alias-free (and >= 8N).
int required_grid(const TorusMap& map, int N);

/// Columns: FFT of e^{2 pi i m.T(x)} on a G x G grid, then the heat multiplier
/// e^{-4 pi^2 nu |k|^2} on the output mode. The mode-0 row and column are set to e_0
/// exactly (T preserves area). grid = 0 picks required_grid; an explicit grid below it
/// throws ConfigError. Throws ConfigError for N < 4 or nu < 0.
TruncatedOperator build_transfer_operator(const TorusMap& map, double nu, int N, int grid = 0);

struct VelocityField {
    std::vector<TrigTerm> terms;
};

/// Throws ValidationError unless div v = 0 coefficientwise.
TruncatedOperator build_advection_diffusion_generator(const VelocityField& v, double nu, int N);

// v = (sin 2 pi x2, 0).
VelocityField shear_flow();

/// Connected components of the coupling graph (nonzero off-diagonal entries), restricted to
/// the modes accepted by `keep`. Each component is sorted.
std::vector<std::vector<int>> coupled_blocks(const TruncatedOperator& op,
                                             const std::function<bool(int, int)>& keep = {});

Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& m, const std::vector<int>& idx);

}  // namespace dlab::spectral
