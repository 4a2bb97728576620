#include "dlab/spectral/spectrum.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dlab/errors.hpp"
#include "dlab/random.hpp"

namespace dlab::spectral {

namespace {

bool rate_order(OperatorKind kind, cplx a, cplx b) {
    const double ra = decay_rate(kind, a), rb = decay_rate(kind, b);
    if (ra != rb) return ra < rb;
    return a.imag() < b.imag();
}

}  // namespace

double decay_rate(OperatorKind kind, cplx lambda) noexcept {
    if (kind == OperatorKind::Generator) return lambda.real();
    const double m = std::abs(lambda);
    return m > 0.0 ? -std::log(m) : std::numeric_limits<double>::infinity();
}

std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& m) {
    const auto n = static_cast<lapack_int>(m.rows());
    if (n == 0) return {};
    if (n == 1) return {m(0, 0)};
    Eigen::MatrixXcd a = m;
    std::vector<cplx> w(n);
    cplx dummy;
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), &dummy, 1, &dummy, 1);
    if (info != 0) {
        std::ostringstream os;
        os << "zgeev failed (info " << info << ") on a " << n << "x" << n << " matrix with Frobenius norm "
           << m.norm() << " and max entry " << m.cwiseAbs().maxCoeff();
        throw NumericalError(os.str());
    }
    return w;
}

SpectrumResult spectrum_and_gap(const TruncatedOperator& op, const std::function<bool(int, int)>& keep) {
    SpectrumResult res;
    res.kind = op.kind;
    res.N = op.modes.N;
    res.nu = op.nu;
    for (const auto& block : coupled_blocks(op, keep)) {
        const auto w = eigenvalues(submatrix(op.matrix, block));
        res.eigenvalues.insert(res.eigenvalues.end(), w.begin(), w.end());
    }
    if (res.eigenvalues.empty()) throw ConfigError("keep", "mode filter leaves no modes");
    std::stable_sort(res.eigenvalues.begin(), res.eigenvalues.end(),
                     [&](cplx a, cplx b) { return rate_order(op.kind, a, b); });
    for (const auto& l : res.eigenvalues) res.rates.push_back(decay_rate(op.kind, l));

    const cplx target = op.kind == OperatorKind::Transfer ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    std::size_t inv = 0;
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i) {
        const double d = std::abs(res.eigenvalues[i] - target);
        if (d < std::abs(res.eigenvalues[inv] - target)) inv = i;
        if (d < 1e-8) ++res.invariant_multiplicity;
    }
    res.invariant = res.eigenvalues[inv];
    // With a filter that removes the invariant mode, the gap is the smallest rate outright.
    const bool drop = !keep || keep(0, 0);
    res.gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i) {
        if (drop && i == inv) continue;
        res.gap = std::min(res.gap, res.rates[i]);
    }
    res.max_modulus = 0.0;
    res.min_real_part = std::numeric_limits<double>::infinity();
    for (const auto& l : res.eigenvalues) {
        res.max_modulus = std::max(res.max_modulus, std::abs(l));
        res.min_real_part = std::min(res.min_real_part, l.real());
    }
    // Conjugate pairing: sort both lists and compare nearest neighbours in a window.
    if (!keep) {
        const auto& ev = res.eigenvalues;
        std::vector<cplx> sorted = ev;
        auto lex = [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
        std::sort(sorted.begin(), sorted.end(), lex);
        for (const auto& l : ev) {
            const cplx c = std::conj(l);
            auto it = std::lower_bound(sorted.begin(), sorted.end(), cplx(c.real() - 1e-6, -1e300), lex);
            double best = std::numeric_limits<double>::infinity();
            for (; it != sorted.end() && it->real() <= c.real() + 1e-6; ++it) best = std::min(best, std::abs(*it - c));
            if (!std::isfinite(best)) {
                for (const auto& m : sorted) best = std::min(best, std::abs(m - c));
            }
            res.conjugation_error = std::max(res.conjugation_error, best);
        }
    }
    return res;
}

std::vector<cplx> dominant_eigenvalues(const TruncatedOperator& op, int krylov_dim, double tol) {
    const auto n = op.matrix.rows();
    const int z = op.modes.zero();
    const int m = static_cast<int>(std::min<Eigen::Index>(krylov_dim, n - 1));
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, m + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
    rng::Stream stream(0xA5A5, rng::StreamTag::Synthetic, 0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(stream.normal(), stream.normal());
    v(z) = 0.0;
    V.col(0) = v / v.norm();
    int built = m;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXcd w = op.matrix * V.col(j);
        w(z) = 0.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                const cplx h = V.col(i).dot(w);
                H(i, j) += h;
                w -= h * V.col(i);
            }
        }
        H(j + 1, j) = w.norm();
        if (std::abs(H(j + 1, j)) < 1e-300) {
            built = j + 1;
            break;
        }
        V.col(j + 1) = w / H(j + 1, j);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H.topLeftCorner(built, built));
    if (es.info() != Eigen::Success) throw NumericalError("Arnoldi: Hessenberg eigensolve failed");
    const double beta = built < m + 1 ? std::abs(H(built, built - 1)) : 0.0;
    std::vector<cplx> out;
    for (int i = 0; i < built; ++i) {
        const double resid = beta * std::abs(es.eigenvectors()(built - 1, i));
        if (resid < tol) out.push_back(es.eigenvalues()(i));
    }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) > std::abs(b) : a.imag() < b.imag();
    });
    return out;
}

double dominant_gap(const TruncatedOperator& op) {
    const auto ev = dominant_eigenvalues(op);
    if (ev.empty()) throw NumericalError("Arnoldi: no converged Ritz value");
    return decay_rate(op.kind, ev.front());
}

std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    // Jonker-Volgenant style potentials, O(n^2 m).
    const int n = static_cast<int>(cost.size());
    if (n == 0) return {};
    const int m = static_cast<int>(cost[0].size());
    if (m < n) throw ConfigError("cost", "assignment needs rows <= cols");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assign(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (p[j]) assign[p[j] - 1] = j - 1;
    }
    return assign;
}

double matched_displacement(std::vector<cplx> a, std::vector<cplx> b, int* unmatched) {
    if (a.size() > b.size()) std::swap(a, b);
    if (unmatched) *unmatched = static_cast<int>(b.size() - a.size());
    if (a.empty()) return 0.0;
    auto by_imag = [](cplx x, cplx y) { return x.imag() != y.imag() ? x.imag() < y.imag() : x.real() < y.real(); };
    std::sort(a.begin(), a.end(), by_imag);
    std::sort(b.begin(), b.end(), by_imag);
    std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) cost[i][j] = std::abs(a[i] - b[j]);
    }
    const auto asg = min_cost_assignment(cost);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, cost[i][asg[i]]);
    return worst;
}

MatchingReport resonance_convergence(const TorusMap& map, const std::vector<double>& nu_list, double region_radius,
                                     int N, double truncation_nu,
                                     const std::map<double, std::vector<cplx>>* known) {
    if (!(region_radius > 0.0)) throw ConfigError("region", "region radius must be positive");
    if (nu_list.size() < 2) throw ConfigError("nus", "need at least two values of nu");
    for (std::size_t i = 1; i < nu_list.size(); ++i) {
        if (!(nu_list[i] < nu_list[i - 1])) throw ConfigError("nus", "nu list must strictly decrease");
    }
    auto inside = [&](const std::vector<cplx>& ev) {
        std::vector<cplx> out;
        for (const auto& l : ev) {
            if (std::abs(l) >= region_radius) out.push_back(l);
        }
        return out;
    };
    MatchingReport rep;
    rep.region_radius = region_radius;
    auto spectrum_at = [&](double nu) {
        if (known) {
            if (const auto it = known->find(nu); it != known->end()) return it->second;
        }
        return spectrum_and_gap(build_transfer_operator(map, nu, N)).eigenvalues;
    };
    for (double nu : nu_list) rep.region_eigenvalues.push_back(inside(spectrum_at(nu)));
    for (std::size_t i = 1; i < nu_list.size(); ++i) {
        MatchStep st;
        st.nu_from = nu_list[i - 1];
        st.nu_to = nu_list[i];
        st.count_from = static_cast<int>(rep.region_eigenvalues[i - 1].size());
        st.count_to = static_cast<int>(rep.region_eigenvalues[i].size());
        st.boundary_crossing = st.count_from != st.count_to;
        st.max_displacement = matched_displacement(rep.region_eigenvalues[i - 1], rep.region_eigenvalues[i]);
        rep.steps.push_back(st);
    }
    // Truncation check: region eigenvalues at N (dense) vs 2N (Arnoldi plus the invariant 1).
    rep.truncation_nu = truncation_nu;
    const auto coarse = inside(spectrum_at(truncation_nu));
    const auto fine_op = build_transfer_operator(map, truncation_nu, 2 * N);
    auto fine_all = dominant_eigenvalues(fine_op);
    fine_all.push_back(fine_op.matrix(fine_op.modes.zero(), fine_op.modes.zero()));
    const auto fine = inside(fine_all);
    int unmatched = 0;
    rep.truncation_displacement = matched_displacement(coarse, fine, &unmatched);
    rep.truncation_stable = unmatched == 0 && rep.truncation_displacement <= 1e-6;
    return rep;
}

}  // namespace dlab::spectral
