#include "dlab/spectral/operator.hpp"

#include <fftw3.h>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "dlab/errors.hpp"
#include "dlab/numerics.hpp"

namespace dlab::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

bool smooth_size(int n) {
    for (int p : {2, 3, 5}) {
        while (n % p == 0) n /= p;
    }
    return n == 1;
}

double heat(const ModeLattice& L, int i, double nu) {
    const double k1 = L.k1(i), k2 = L.k2(i);
    return std::exp(-kFourPi2 * nu * (k1 * k1 + k2 * k2));
}

}  // namespace

int required_grid(const TorusMap& map, int N) {
    const auto& a = map.linear();
    // Largest |A^T m|_inf over the lattice and largest |m.psi| amplitude.
    const int atm = N * std::max(std::abs(a[0]) + std::abs(a[2]), std::abs(a[1]) + std::abs(a[3]));
    double amp = 0.0;
    for (const auto& t : map.psi()) amp += std::hypot(t.sin_amp, t.cos_amp);
    // e^{i z sin} has Bessel coefficients below 1e-17 beyond order e z / 2 + 40.
    const double z = kTwoPi * map.eps() * N * amp;
    const int spread = trig_bandwidth(map.psi()) * static_cast<int>(std::ceil(std::numbers::e * z / 2.0 + 40.0));
    int g = N + atm + (map.eps() > 0.0 ? spread : 0) + 1;
    while (!smooth_size(g)) ++g;
    return g;
}

TruncatedOperator build_transfer_operator(const TorusMap& map, double nu, int N, int grid) {
    if (N < 4) throw ConfigError("N", "truncation order must be at least 4");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("nu", "nu must be finite and >= 0");
    const int need = required_grid(map, N);
    if (grid != 0 && grid < need) throw ConfigError("grid", "FFT grid too coarse for the requested truncation");
    const int G = grid ? grid : need;

    TruncatedOperator op;
    op.modes = ModeLattice{N};
    op.kind = OperatorKind::Transfer;
    op.nu = nu;
    const auto& L = op.modes;
    const int n = L.size();
    op.matrix = Eigen::MatrixXcd::Zero(n, n);
    const auto& a = map.linear();

    if (map.eps() == 0.0) {
        // Composition sends e_m to e_{A^T m} exactly.
        for (int j = 0; j < n; ++j) {
            const int m1 = L.k1(j), m2 = L.k2(j);
            const int k1 = a[0] * m1 + a[2] * m2, k2 = a[1] * m1 + a[3] * m2;
            if (L.contains(k1, k2)) op.matrix(L.index(k1, k2), j) = heat(L, L.index(k1, k2), nu);
        }
        return op;
    }

    // Column m samples exp(2 pi i (A^T m . x + m . eps psi(x))). The linear phase is an integer
    // multiple of 1/G on the grid, so it comes from a table of roots of unity; the perturbation
    // factors exp(2 pi i m_k eps psi_k) are tabulated once per m_k.
    const std::size_t gg = static_cast<std::size_t>(G) * G;
    std::vector<cplx> roots(G);
    for (int r = 0; r < G; ++r) roots[r] = std::polar(1.0, kTwoPi * r / G);
    std::vector<double> p1(gg), p2(gg);
    for (int i = 0; i < G; ++i) {
        for (int j = 0; j < G; ++j) {
            const auto p = trig_field(map.psi(), static_cast<double>(i) / G, static_cast<double>(j) / G);
            p1[static_cast<std::size_t>(i) * G + j] = map.eps() * p[0];
            p2[static_cast<std::size_t>(i) * G + j] = map.eps() * p[1];
        }
    }
    const std::size_t width = 2 * static_cast<std::size_t>(N) + 1;
    std::vector<cplx> f1(width * gg), f2(width * gg);
    for (int m = -N; m <= N; ++m) {
        const std::size_t off = static_cast<std::size_t>(m + N) * gg;
        for (std::size_t q = 0; q < gg; ++q) {
            f1[off + q] = std::polar(1.0, kTwoPi * m * p1[q]);
            f2[off + q] = std::polar(1.0, kTwoPi * m * p2[q]);
        }
    }
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_mutex());
        auto* tmp = fftw_alloc_complex(gg);
        plan = fftw_plan_dft_2d(G, G, tmp, tmp, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_free(tmp);
    }
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) h[i] = heat(L, i, nu);

    parallel_for(static_cast<std::size_t>(n), default_workers(), [&](std::size_t b, std::size_t e) {
        fftw_complex* buf = fftw_alloc_complex(gg);
        for (std::size_t col = b; col < e; ++col) {
            const int m1 = L.k1(static_cast<int>(col)), m2 = L.k2(static_cast<int>(col));
            if (m1 == 0 && m2 == 0) continue;
            const long s1 = a[0] * m1 + a[2] * m2, s2 = a[1] * m1 + a[3] * m2;  // A^T m
            const cplx* r1 = f1.data() + static_cast<std::size_t>(m1 + N) * gg;
            const cplx* r2 = f2.data() + static_cast<std::size_t>(m2 + N) * gg;
            for (int i = 0; i < G; ++i) {
                for (int j = 0; j < G; ++j) {
                    const std::size_t q = static_cast<std::size_t>(i) * G + j;
                    const long lin = ((s1 * i + s2 * j) % G + G) % G;
                    const cplx v = roots[lin] * r1[q] * r2[q];
                    buf[q][0] = v.real();
                    buf[q][1] = v.imag();
                }
            }
            fftw_execute_dft(plan, buf, buf);
            const double scale = 1.0 / static_cast<double>(gg);
            for (int row = 0; row < n; ++row) {
                const int k1 = L.k1(row), k2 = L.k2(row);
                const std::size_t q = static_cast<std::size_t>((k1 % G + G) % G) * G + (k2 % G + G) % G;
                op.matrix(row, static_cast<Eigen::Index>(col)) = cplx(buf[q][0], buf[q][1]) * (scale * h[row]);
            }
        }
        fftw_free(buf);
    });
    {
        std::lock_guard lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    const int z = L.zero();
    op.matrix.row(z).setZero();
    op.matrix.col(z).setZero();
    op.matrix(z, z) = 1.0;
    return op;
}

VelocityField shear_flow() { return {{TrigTerm{0, 0, 1, 1.0, 0.0}}}; }

TruncatedOperator build_advection_diffusion_generator(const VelocityField& v, double nu, int N) {
    if (N < 4) throw ConfigError("N", "truncation order must be at least 4");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("nu", "nu must be finite and >= 0");
    // Complex coefficients: coeff[(q1, q2)][c].
    std::map<std::pair<int, int>, std::array<cplx, 2>> coeff;
    for (const auto& t : v.terms) {
        if (t.component < 0 || t.component > 1) throw ValidationError("velocity term component must be 0 or 1");
        if (t.q1 == 0 && t.q2 == 0) {
            coeff[{0, 0}][t.component] += t.cos_amp;
            continue;
        }
        // sin = (e^{i} - e^{-i}) / 2i, cos = (e^{i} + e^{-i}) / 2.
        coeff[{t.q1, t.q2}][t.component] += cplx(0.5 * t.cos_amp, -0.5 * t.sin_amp);
        coeff[{-t.q1, -t.q2}][t.component] += cplx(0.5 * t.cos_amp, 0.5 * t.sin_amp);
    }
    for (const auto& [q, c] : coeff) {
        if (std::abs(static_cast<double>(q.first) * c[0] + static_cast<double>(q.second) * c[1]) > 1e-12) {
            throw ValidationError("velocity field is not divergence-free");
        }
    }
    TruncatedOperator op;
    op.modes = ModeLattice{N};
    op.kind = OperatorKind::Generator;
    op.nu = nu;
    const auto& L = op.modes;
    const int n = L.size();
    op.matrix = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const int m1 = L.k1(j), m2 = L.k2(j);
        op.matrix(j, j) += kFourPi2 * nu * (m1 * m1 + m2 * m2);
        for (const auto& [q, c] : coeff) {
            const int k1 = m1 + q.first, k2 = m2 + q.second;
            if (!L.contains(k1, k2)) continue;
            op.matrix(L.index(k1, k2), j) += cplx(0.0, kTwoPi) * (c[0] * static_cast<double>(m1) + c[1] * static_cast<double>(m2));
        }
    }
    return op;
}

std::vector<std::vector<int>> coupled_blocks(const TruncatedOperator& op, const std::function<bool(int, int)>& keep) {
    const int n = op.modes.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<char> on(n, 1);
    if (keep) {
        for (int i = 0; i < n; ++i) on[i] = keep(op.modes.k1(i), op.modes.k2(i)) ? 1 : 0;
    }
    for (int j = 0; j < n; ++j) {
        if (!on[j]) continue;
        for (int i = 0; i < n; ++i) {
            if (i == j || !on[i] || op.matrix(i, j) == cplx(0.0, 0.0)) continue;
            const int a = find(i), b = find(j);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) {
        if (on[i]) groups[find(i)].push_back(i);
    }
    std::vector<std::vector<int>> out;
    for (auto& [root, idx] : groups) out.push_back(std::move(idx));
    return out;
}

Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& m, const std::vector<int>& idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd out(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < k; ++i) out(i, j) = m(idx[i], idx[j]);
    }
    return out;
}

}  // namespace dlab::spectral
