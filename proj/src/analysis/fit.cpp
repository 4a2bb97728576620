#include "dlab/analysis/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlab/errors.hpp"
#include "dlab/random.hpp"

namespace dlab::analysis {

namespace {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

Line weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
        syy += w[i] * (y[i] - my) * (y[i] - my);
    }
    Line l;
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - l.intercept - l.slope * x[i];
        ss_res += w[i] * r * r;
    }
    l.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    return l;
}

double quantile(std::vector<double> xs, double q) {
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return i + 1 < xs.size() ? xs[i] * (1 - f) + xs[i + 1] * f : xs.back();
}

}  // namespace

double effective_stderr(const DecayCurve& curve, std::size_t i) noexcept {
    const double rel = 1e-12 * std::abs(curve.values[i]);
    if (curve.stderrs[i] > 0.0) return std::max(curve.stderrs[i], rel);
    const double scale = std::abs(curve.values.empty() ? 0.0 : curve.values.front());
    return 1e-14 * scale + rel;
}

Window default_window(const DecayCurve& curve, double k) {
    curve.validate();
    const std::size_t n = curve.size();
    if (n < 2) throw FitError("curve too short for a fit window");
    const double v0 = curve.values.front();
    std::size_t i0 = 0;
    while (i0 < n && curve.values[i0] > v0 / std::numbers::e) ++i0;
    if (i0 >= n) throw FitError("curve never drops below value(0)/e");
    std::size_t i1 = i0;
    while (i1 + 1 < n && curve.values[i1 + 1] >= k * effective_stderr(curve, i1 + 1)) ++i1;
    if (i1 <= i0) throw FitError("no room between the mixing time and the noise floor");
    return {curve.times[i0], curve.times[i1]};
}

DecayFit fit_exponential(const DecayCurve& curve, std::optional<Window> window, std::uint64_t bootstrap_seed,
                         int resamples) {
    curve.validate();
    if (curve.power < 1) throw FitError("curve power must be positive");
    DecayFit fit;
    fit.window = window ? *window : default_window(curve);
    if (!(fit.window.t0 < fit.window.t1)) throw FitError("fit window must satisfy t0 < t1");
    std::vector<double> t, y, w, v, s;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double ti = curve.times[i];
        if (ti < fit.window.t0 || ti > fit.window.t1) continue;
        const double si = effective_stderr(curve, i);
        if (!(curve.values[i] > 2.0 * si)) {
            fit.excluded_times.push_back(ti);
            continue;
        }
        t.push_back(ti);
        v.push_back(curve.values[i]);
        s.push_back(si);
        y.push_back(std::log(curve.values[i]));
        w.push_back((curve.values[i] / si) * (curve.values[i] / si));
    }
    fit.points_used = t.size();
    if (t.size() < 6) throw FitError("fewer than 6 usable points in the fit window");

    const double p = curve.power;
    const Line line = weighted_line(t, y, w);
    fit.beta = -line.slope / p;
    fit.prefactor = std::exp(line.intercept / p);
    fit.r_squared = line.r_squared;

    rng::Stream stream(bootstrap_seed, rng::StreamTag::Bootstrap, 0);
    std::vector<double> betas;
    betas.reserve(resamples);
    std::vector<double> bt, by, bw;
    for (int b = 0; b < resamples; ++b) {
        bt.clear();
        by.clear();
        bw.clear();
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double vi = v[i] + s[i] * stream.normal();
            if (!(vi > 0.0)) continue;
            bt.push_back(t[i]);
            by.push_back(std::log(vi));
            bw.push_back((vi / s[i]) * (vi / s[i]));
        }
        if (bt.size() < 3) continue;
        betas.push_back(-weighted_line(bt, by, bw).slope / p);
    }
    if (betas.size() < static_cast<std::size_t>(resamples) / 2) throw FitError("bootstrap failed: too few valid resamples");
    fit.ci_lo = std::min(quantile(betas, 0.025), fit.beta);
    fit.ci_hi = std::max(quantile(betas, 0.975), fit.beta);
    if (!std::isfinite(fit.ci_lo) || !std::isfinite(fit.ci_hi) || !(fit.prefactor > 0.0)) {
        throw FitError("non-finite fit result");
    }
    return fit;
}

RateSweep prefactor_exponent(const std::vector<double>& nus, const std::vector<DecayFit>& fits) {
    if (nus.size() != fits.size()) throw ConfigError("nus", "one fit per nu is required");
    if (nus.size() < 4) throw ConfigError("nus", "a sweep needs at least 4 values of nu");
    for (std::size_t i = 0; i < nus.size(); ++i) {
        if (!(nus[i] > 0.0)) throw ConfigError("nus", "nu must be positive");
        if (i && !(nus[i] < nus[i - 1])) throw ConfigError("nus", "nu list must strictly decrease");
    }
    RateSweep sw;
    sw.nus = nus;
    sw.fits = fits;
    std::vector<double> x, y, w(nus.size(), 1.0);
    for (std::size_t i = 0; i < nus.size(); ++i) {
        x.push_back(std::log(1.0 / nus[i]));
        y.push_back(std::log(fits[i].prefactor));
        if (!fits[i].converged) sw.partial = true;
    }
    sw.k_hat = weighted_line(x, y, w).slope;
    const auto it = std::min_element(fits.begin(), fits.end(), [](const auto& a, const auto& b) { return a.beta < b.beta; });
    sw.beta_floor = it->beta;
    sw.beta_floor_lo = it->ci_lo;
    sw.beta_floor_hi = it->ci_hi;
    return sw;
}

EnvelopeReport envelope_checks(const DecayCurve& curve, double nu, double c_env, double c_poinc, double c_short,
                               std::optional<double> initial) {
    curve.validate();
    if (!(nu > 0.0) || !(nu < 1.0 / std::numbers::e)) throw ConfigError("nu", "envelope checks need 0 < nu < 1/e");
    EnvelopeReport rep;
    rep.log_inv_nu = std::log(1.0 / nu);
    rep.c_env = c_env;
    if (curve.size() == 0) return rep;
    const double p = curve.power;
    const double v0 = initial ? *initial : curve.values.front();
    const double s0 = initial ? 0.0 : curve.stderrs.front();
    // value <= m v0 + 2 sqrt(s^2 + m^2 s0^2)
    auto holds = [&](double value, double s, double m) {
        return value <= m * v0 + 2.0 * std::sqrt(s * s + m * m * s0 * s0);
    };
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double t = curve.times[i];
        const double value = curve.values[i];
        const double s = curve.stderrs[i];
        const double decay = std::exp(-t / rep.log_inv_nu);
        auto multiplier = [&](double c) { return std::pow(c * decay, p); };
        if (!holds(value, s, multiplier(1.0))) {
            // Smallest admissible constant at this sample (the condition is monotone in c).
            double lo = 1.0, hi = 2.0;
            while (!holds(value, s, multiplier(hi)) && hi < 1e300) hi *= 2.0;
            for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (holds(value, s, multiplier(mid)) ? hi : lo) = mid;
            }
            rep.c_env_min = std::max(rep.c_env_min, hi);
        }
        if (!holds(value, s, multiplier(c_env))) rep.envelope_violations.push_back(t);
        if (t <= c_short * rep.log_inv_nu && !holds(value, s, std::exp(p * c_poinc * nu * t))) {
            rep.short_time_violations.push_back(t);
        }
    }
    rep.envelope_pass = rep.envelope_violations.empty();
    rep.short_time_pass = rep.short_time_violations.empty();
    return rep;
}

}  // namespace dlab::analysis
