#pragma once

// Transfer-operator action computed directly: evaluate u(T(x)) on a fine grid, transform
// with Eigen's FFT (independent of the FFTW path in the library) and apply the heat
// multiplier on the output modes.

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dlab/spectral/operator.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline Eigen::MatrixXcd fft2(const Eigen::MatrixXcd& f) {
    Eigen::FFT<double> fft;
    const auto n = f.rows();
    Eigen::MatrixXcd out(n, n), rows(n, n);
    std::vector<cplx> in(n), tmp;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) in[j] = f(i, j);
        fft.fwd(tmp, in);
        for (Eigen::Index j = 0; j < n; ++j) rows(i, j) = tmp[j];
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) in[i] = rows(i, j);
        fft.fwd(tmp, in);
        for (Eigen::Index i = 0; i < n; ++i) out(i, j) = tmp[i] / static_cast<double>(n * n);
    }
    return out;
}

// u is supported on |k|_inf <= band; G is the grid per axis.
inline Eigen::VectorXcd composition_oracle(const dlab::spectral::TorusMap& map, double nu,
                                           const dlab::spectral::ModeLattice& L, const Eigen::VectorXcd& u, int band,
                                           int G) {
    const double two_pi = 2.0 * std::numbers::pi;
    Eigen::MatrixXcd f(G, G);
    for (int i = 0; i < G; ++i) {
        for (int j = 0; j < G; ++j) {
            const auto y = map.apply(static_cast<double>(i) / G, static_cast<double>(j) / G);
            cplx acc = 0.0;
            for (int k1 = -band; k1 <= band; ++k1) {
                for (int k2 = -band; k2 <= band; ++k2) {
                    acc += u(L.index(k1, k2)) * std::polar(1.0, two_pi * (k1 * y[0] + k2 * y[1]));
                }
            }
            f(i, j) = acc;
        }
    }
    const Eigen::MatrixXcd F = fft2(f);
    Eigen::VectorXcd expect(L.size());
    for (int i = 0; i < L.size(); ++i) {
        const int k1 = L.k1(i), k2 = L.k2(i);
        const double heat = std::exp(-two_pi * two_pi * nu * (k1 * k1 + k2 * k2));
        expect(i) = F((k1 + G) % G, (k2 + G) % G) * heat;
    }
    return expect;
}

}  // namespace oracle
