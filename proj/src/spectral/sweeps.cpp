#include "dlab/spectral/sweeps.hpp"

#include <algorithm>
#include <cmath>

#include "dlab/errors.hpp"
#include "dlab/spectral/contour.hpp"
#include "dlab/spectral/spectrum.hpp"

namespace dlab::spectral {

Eigen::VectorXcd smooth_initial_condition(const ModeLattice& modes) {
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(modes.size());
    for (int i = 0; i < modes.size(); ++i) {
        const int k1 = modes.k1(i), k2 = modes.k2(i);
        if ((k1 == 0 && k2 == 0) || std::max(std::abs(k1), std::abs(k2)) > 4) continue;
        // u_{-k} = conj(u_k), so u is real in physical space.
        u(i) = std::exp(-0.5 * (k1 * k1 + k2 * k2)) * cplx(1.0, 0.25 * k1);
    }
    return u;
}

DecayCurve map_decay_curve(const TruncatedOperator& transfer, const Eigen::VectorXcd& u0, int steps) {
    if (transfer.kind != OperatorKind::Transfer) throw ConfigError("operator", "map curve needs a transfer operator");
    if (steps < 1) throw ConfigError("steps", "need at least one step");
    if (u0.size() != transfer.matrix.cols()) throw ConfigError("u0", "initial condition size mismatch");
    DecayCurve c;
    c.power = 2;
    c.label = "map nu=" + std::to_string(transfer.nu);
    Eigen::VectorXcd u = u0;
    double log_norm = std::log(u.norm());
    if (!std::isfinite(log_norm)) throw ConfigError("u0", "initial condition must be nonzero");
    u /= u.norm();
    for (int n = 0; n <= steps; ++n) {
        const double v = std::exp(2.0 * log_norm);
        c.times.push_back(n);
        c.values.push_back(v);
        c.stderrs.push_back(1e-13 * (n + 1) * v);
        if (n == steps) break;
        u = transfer.matrix * u;
        const double norm = u.norm();
        if (!(norm > 0.0)) throw NumericalError("map curve collapsed to zero");
        log_norm += std::log(norm);
        u /= norm;
    }
    return c;
}

DecayCurve generator_decay_curve(const TruncatedOperator& generator, const Eigen::VectorXcd& u0,
                                 const std::vector<double>& times) {
    if (generator.kind != OperatorKind::Generator) throw ConfigError("operator", "generator kind required");
    if (u0.size() != generator.matrix.cols()) throw ConfigError("u0", "initial condition size mismatch");
    DecayCurve c;
    c.power = 2;
    c.label = "generator nu=" + std::to_string(generator.nu);
    for (double t : times) {
        c.times.push_back(t);
        c.values.push_back((semigroup_dense(generator.matrix, t) * u0).squaredNorm());
        c.stderrs.push_back(0.0);
    }
    c.validate();
    return c;
}

std::vector<GapRow> map_gap_sweep(const TorusMap& map, const std::vector<double>& nus, int N,
                                  std::vector<SpectrumResult>* spectra) {
    std::vector<GapRow> rows;
    for (double nu : nus) {
        GapRow r;
        r.nu = nu;
        r.N = N;
        auto sp = spectrum_and_gap(build_transfer_operator(map, nu, N));
        r.gap = sp.gap;
        if (spectra) spectra->push_back(std::move(sp));
        r.gap_2N = dominant_gap(build_transfer_operator(map, nu, 2 * N));
        r.converged = std::abs(r.gap_2N - r.gap) <= 0.01 * r.gap;
        rows.push_back(r);
    }
    return rows;
}

std::vector<GapRow> generator_gap_sweep(const VelocityField& v, const std::vector<double>& nus, int N,
                                        const std::function<bool(int, int)>& keep,
                                        std::vector<SpectrumResult>* spectra) {
    std::vector<GapRow> rows;
    for (double nu : nus) {
        GapRow r;
        r.nu = nu;
        r.N = N;
        auto sp = spectrum_and_gap(build_advection_diffusion_generator(v, nu, N), keep);
        r.gap = sp.gap;
        if (spectra) spectra->push_back(std::move(sp));
        r.gap_2N = spectrum_and_gap(build_advection_diffusion_generator(v, nu, 2 * N), keep).gap;
        r.converged = std::abs(r.gap_2N - r.gap) <= 0.01 * r.gap;
        rows.push_back(r);
    }
    return rows;
}

double gap_scaling_exponent(const std::vector<GapRow>& rows) {
    if (rows.size() < 2) throw ConfigError("nus", "need at least two gaps for a scaling exponent");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        const double x = std::log(r.nu), y = std::log(r.gap);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(rows.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double gap_spread_factor(const std::vector<GapRow>& rows) {
    if (rows.empty()) throw ConfigError("nus", "empty sweep");
    std::vector<double> g;
    for (const auto& r : rows) g.push_back(r.gap);
    std::sort(g.begin(), g.end());
    const std::size_t n = g.size();
    const double median = n % 2 ? g[n / 2] : 0.5 * (g[n / 2 - 1] + g[n / 2]);
    return std::max(median / g.front(), g.back() / median);
}

}  // namespace dlab::spectral
