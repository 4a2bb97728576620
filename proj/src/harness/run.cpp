#include "dlab/harness/run.hpp"

#include <openssl/evp.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dlab/analysis/discrepancy.hpp"
#include "dlab/analysis/fit.hpp"
#include "dlab/analysis/lyapunov.hpp"
#include "dlab/errors.hpp"
#include "dlab/hyperbolic/bolza.hpp"
#include "dlab/hyperbolic/sampling.hpp"
#include "dlab/numerics.hpp"
#include "dlab/random.hpp"
#include "dlab/spectral/contour.hpp"
#include "dlab/spectral/sweeps.hpp"
#include "dlab/stochastic/flow.hpp"

#ifndef DLAB_VERSION
#define DLAB_VERSION "unknown"
#endif

namespace dlab::harness {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// Collects output files and scalar results for one run.
class Sink {
public:
    explicit Sink(fs::path dir) : dir_(std::move(dir)) {}

    void csv(const std::string& name, const std::string& header, const std::vector<std::vector<double>>& rows) {
        std::ostringstream os;
        os << header << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
            os << '\n';
        }
        text(name, os.str());
    }

    void text(const std::string& name, const std::string& body) {
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!out) throw EngineError("cannot write " + (dir_ / name).string());
        out << body;
        if (!out) throw EngineError("write failed for " + (dir_ / name).string());
        names_.push_back(name);
    }

    void put(const std::string& key, double v) { summary_[key] = v; }

    const std::vector<std::string>& names() const { return names_; }
    const std::map<std::string, double>& summary() const { return summary_; }

private:
    fs::path dir_;
    std::vector<std::string> names_;
    std::map<std::string, double> summary_;
};

std::vector<std::vector<double>> curve_rows(const DecayCurve& c) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < c.size(); ++i) rows.push_back({c.times[i], c.values[i], c.stderrs[i]});
    return rows;
}

std::string curve_name(double nu) { return "curve_nu" + nu_tag(nu) + ".csv"; }

// Distinct deterministic seed per sweep member.
std::uint64_t member_seed(std::uint64_t seed, std::size_t i) { return rng::splitmix64(seed + 0x9e37 * (i + 1)); }

hyperbolic::ObservableCombination centred_bump(double r0) {
    const hyperbolic::Observable f(hyperbolic::GroupElement{}, r0);
    hyperbolic::ObservableCombination u(-f.mean());
    u.add(1.0, f);
    return u;
}

const char* pass_word(bool ok) { return ok ? "PASS" : "FAIL"; }

struct EnvelopeConstants {
    double c_env = 10.0;
    double c_poinc = 1.0;
    double c_short = 1.0;
};

// Fits, envelope checks and (with >= 4 members) the prefactor sweep for a family of curves.
void analyse_curves(Sink& sink, std::uint64_t seed, const std::vector<double>& nus, const std::vector<DecayCurve>& curves,
                    double fit_k, const EnvelopeConstants& k, std::ostringstream& verdict,
                    const std::vector<double>& initial = {}) {
    std::vector<std::vector<double>> fit_rows, window_rows, env_rows;
    std::vector<analysis::DecayFit> fits;
    bool all_fitted = true;
    for (std::size_t i = 0; i < nus.size(); ++i) {
        const double nu = nus[i];
        const std::string tag = "@" + nu_tag(nu);
        try {
            const auto window = analysis::default_window(curves[i], fit_k);
            const auto fit = analysis::fit_exponential(curves[i], window, member_seed(seed ^ 0xb007, i));
            fits.push_back(fit);
            fit_rows.push_back({nu, fit.beta, fit.ci_lo, fit.ci_hi, fit.prefactor, fit.r_squared});
            window_rows.push_back({nu, fit.window.t0, fit.window.t1, static_cast<double>(fit.points_used),
                                   static_cast<double>(fit.excluded_times.size())});
            sink.put("beta" + tag, fit.beta);
            sink.put("beta_lo" + tag, fit.ci_lo);
            sink.put("beta_hi" + tag, fit.ci_hi);
            sink.put("C" + tag, fit.prefactor);
            sink.put("fit_ok" + tag, 1.0);
        } catch (const FitError& e) {
            all_fitted = false;
            sink.put("fit_ok" + tag, 0.0);
            verdict << "fit nu=" << nu_tag(nu) << ": not fitted (" << e.what() << ")\n";
        }
        const auto env = analysis::envelope_checks(curves[i], nu, k.c_env, k.c_poinc, k.c_short,
                                                   initial.empty() ? std::nullopt : std::optional(initial[i]));
        env_rows.push_back({nu, env.c_env, env.c_env_min, env.envelope_pass ? 1.0 : 0.0,
                            env.short_time_pass ? 1.0 : 0.0});
        sink.put("c_env_min" + tag, env.c_env_min);
        sink.put("envelope_pass" + tag, env.envelope_pass);
        sink.put("short_time_pass" + tag, env.short_time_pass);
        verdict << "envelope  nu=" << nu_tag(nu) << " C_env=" << format_number(env.c_env)
                << " min=" << format_number(env.c_env_min) << " " << pass_word(env.envelope_pass) << "\n";
        verdict << "shorttime nu=" << nu_tag(nu) << " " << pass_word(env.short_time_pass) << "\n";
    }
    sink.csv("fits.csv", "nu,beta_hat,beta_lo,beta_hi,C_hat,R2", fit_rows);
    sink.csv("windows.csv", "nu,t0,t1,points,excluded", window_rows);
    sink.csv("envelope.csv", "nu,c_env,c_env_min,envelope_pass,short_time_pass", env_rows);
    if (all_fitted && nus.size() >= 4) {
        const auto sw = analysis::prefactor_exponent(nus, fits);
        sink.csv("sweep.csv", "k_hat,beta_floor,beta_floor_lo,beta_floor_hi,partial",
                 {{sw.k_hat, sw.beta_floor, sw.beta_floor_lo, sw.beta_floor_hi, sw.partial ? 1.0 : 0.0}});
        sink.put("k_hat", sw.k_hat);
        sink.put("beta_floor", sw.beta_floor);
        sink.put("beta_floor_lo", sw.beta_floor_lo);
        verdict << "sweep K_hat=" << format_number(sw.k_hat) << " beta_floor=" << format_number(sw.beta_floor) << "\n";
    }
}

void run_mix(const ExperimentConfig& cfg, Sink& sink) {
    const DiffusionConfig dc{cfg.number("nu"), cfg.number("dt")};
    const auto center = hyperbolic::from_disk({cfg.number("z_re"), cfg.number("z_im")}, cfg.number("theta"));
    const auto n = static_cast<std::size_t>(cfg.integer("particles"));
    auto ens = stochastic::neighbourhood_ensemble(center, cfg.number("delta"), n, cfg.seed, dc);
    const auto& dict = analysis::discrepancy_dictionary();
    std::vector<std::vector<double>> report;
    for (double t : cfg.list("snapshots")) {
        ens = stochastic::evolve_ensemble(std::move(ens), t);
        std::vector<hyperbolic::GroupElement> reduced(ens.states.size());
        parallel_for(reduced.size(), default_workers(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) reduced[i] = hyperbolic::reduce(ens.states[i]);
        });
        std::vector<std::vector<double>> rows;
        rows.reserve(reduced.size());
        for (const auto& g : reduced) {
            const auto p = hyperbolic::to_disk(g);
            rows.push_back({p.z.real(), p.z.imag(), p.theta});
        }
        sink.csv("snapshot_t" + nu_tag(t) + ".csv", "z_re,z_im,theta", rows);
        const auto d = analysis::discrepancy(reduced, dict);
        report.push_back({t, d.value, d.stderr_, static_cast<double>(d.argmax)});
        sink.put("discrepancy@" + nu_tag(t), d.value);
        sink.put("stderr@" + nu_tag(t), d.stderr_);
    }
    sink.csv("discrepancy.csv", "t,discrepancy,stderr,argmax", report);
    if (cfg.flag("reference")) {
        const auto ref = hyperbolic::sample_uniform(n, cfg.seed);
        const auto d = analysis::discrepancy(ref.states, dict);
        sink.csv("reference.csv", "discrepancy,stderr,argmax", {{d.value, d.stderr_, static_cast<double>(d.argmax)}});
        sink.put("reference", d.value);
        sink.put("reference_stderr", d.stderr_);
    }
}

void run_decay(const ExperimentConfig& cfg, Sink& sink) {
    const auto nus = cfg.list("nus");
    const std::string engine = cfg.text("engine");
    std::vector<DecayCurve> curves;
    // The flow curve estimates |u(t)|^2; at t = 0 it is known by quadrature.
    std::vector<double> initial;
    if (engine == "flow") {
        const hyperbolic::Observable f(hyperbolic::GroupElement{}, cfg.number("r0"));
        initial.assign(nus.size(), f.mean_square() - f.mean() * f.mean());
    }
    for (std::size_t i = 0; i < nus.size(); ++i) {
        const double nu = nus[i];
        DecayCurve c;
        if (engine == "flow") {
            const double dt = cfg.number("dt") > 0.0 ? cfg.number("dt") : DiffusionConfig::default_dt(nu);
            const auto times = cfg.list("times");
            c = stochastic::l2_decay_curve(centred_bump(cfg.number("r0")), times, DiffusionConfig{nu, dt},
                                           static_cast<std::size_t>(cfg.integer("n_base")),
                                           static_cast<std::size_t>(cfg.integer("n_paths")), member_seed(cfg.seed, i));
        } else if (engine == "map") {
            const auto op = spectral::build_transfer_operator(spectral::TorusMap::perturbed_cat(cfg.number("eps")), nu,
                                                              static_cast<int>(cfg.integer("N")));
            c = spectral::map_decay_curve(op, spectral::smooth_initial_condition(op.modes),
                                          static_cast<int>(cfg.integer("steps")));
        } else {
            const auto op = spectral::build_advection_diffusion_generator(spectral::VelocityField{}, nu,
                                                                          static_cast<int>(cfg.integer("N")));
            std::vector<double> times = cfg.list("times");
            for (double& t : times) t /= 4.0 * kPi * kPi * nu;
            c = spectral::generator_decay_curve(op, spectral::smooth_initial_condition(op.modes), times);
        }
        sink.csv(curve_name(nu), "t,value,stderr", curve_rows(c));
        curves.push_back(std::move(c));
    }
    std::ostringstream verdict;
    analyse_curves(sink, cfg.seed, nus, curves, cfg.number("fit_k"),
                   {cfg.number("c_env"), cfg.number("c_poinc"), cfg.number("c_short")}, verdict, initial);
    if (engine == "diffusion") {
        for (double nu : nus) {
            const auto it = sink.summary().find("beta@" + nu_tag(nu));
            if (it != sink.summary().end()) sink.put("beta_over_diffusion@" + nu_tag(nu), it->second / (4.0 * kPi * kPi * nu));
        }
    }
    sink.text("verdict.txt", verdict.str());
}

void run_correlate(const ExperimentConfig& cfg, Sink& sink) {
    const auto f = centred_bump(cfg.number("r0"));
    const auto times = cfg.list("times");
    const auto c = stochastic::correlation_curve(f, f, times, static_cast<std::size_t>(cfg.integer("n_samples")), cfg.seed);
    sink.csv("correlation.csv", "t,value,stderr", curve_rows(c));
    std::ostringstream verdict;
    try {
        const auto fit = analysis::fit_exponential(c, analysis::Window{cfg.number("fit_t0"), cfg.number("fit_t1")},
                                                   member_seed(cfg.seed ^ 0xb007, 0));
        sink.csv("fit.csv", "beta_hat,beta_lo,beta_hi,C_hat,R2,points,excluded",
                 {{fit.beta, fit.ci_lo, fit.ci_hi, fit.prefactor, fit.r_squared, static_cast<double>(fit.points_used),
                   static_cast<double>(fit.excluded_times.size())}});
        sink.put("beta", fit.beta);
        sink.put("beta_lo", fit.ci_lo);
        sink.put("beta_hi", fit.ci_hi);
        sink.put("R2", fit.r_squared);
        verdict << "mixing rate beta_hat=" << format_number(fit.beta) << " R2=" << format_number(fit.r_squared) << "\n";
    } catch (const FitError& e) {
        verdict << "mixing rate: not fitted (" << e.what() << ")\n";
    }
    sink.text("verdict.txt", verdict.str());
}

void write_spectrum(Sink& sink, const spectral::SpectrumResult& sp) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
        rows.push_back({sp.eigenvalues[i].real(), sp.eigenvalues[i].imag(), sp.rates[i]});
    }
    sink.csv("spectrum_nu" + nu_tag(sp.nu) + ".csv", "re,im,decay_rate", rows);
}

void write_gaps(Sink& sink, const std::vector<spectral::GapRow>& rows) {
    std::vector<std::vector<double>> out;
    for (const auto& r : rows) {
        out.push_back({r.nu, r.gap, static_cast<double>(r.N), r.converged ? 1.0 : 0.0});
        sink.put("gap@" + nu_tag(r.nu), r.gap);
        sink.put("gap_2N@" + nu_tag(r.nu), r.gap_2N);
        sink.put("gap_converged@" + nu_tag(r.nu), r.converged);
    }
    sink.csv("gaps.csv", "nu,gap,N,converged", out);
    if (rows.size() >= 2) {
        sink.put("gap_exponent", spectral::gap_scaling_exponent(rows));
        sink.put("gap_spread", spectral::gap_spread_factor(rows));
    }
}

void run_spectrum(const ExperimentConfig& cfg, Sink& sink) {
    const auto nus = cfg.list("nus");
    const int N = static_cast<int>(cfg.integer("N"));
    const std::string engine = cfg.text("engine");
    std::vector<spectral::SpectrumResult> spectra;
    if (engine == "map") {
        const auto map = spectral::TorusMap::perturbed_cat(cfg.number("eps"));
        const auto rows = spectral::map_gap_sweep(map, nus, N, &spectra);
        write_gaps(sink, rows);
        for (const auto& sp : spectra) write_spectrum(sink, sp);

        // Decay curves of the same operators for the rate floor.
        std::vector<DecayCurve> curves;
        for (double nu : nus) {
            const auto op = spectral::build_transfer_operator(map, nu, N);
            curves.push_back(spectral::map_decay_curve(op, spectral::smooth_initial_condition(op.modes),
                                                       static_cast<int>(cfg.integer("steps"))));
            sink.csv(curve_name(nu), "t,value,stderr", curve_rows(curves.back()));
        }
        std::ostringstream verdict;
        analyse_curves(sink, cfg.seed, nus, curves, 10.0, {}, verdict);

        if (cfg.flag("matching")) {
            // Each sweep value is followed to half its size.
            std::vector<double> match_nus;
            for (double nu : nus) {
                match_nus.push_back(nu);
                match_nus.push_back(0.5 * nu);
            }
            std::sort(match_nus.begin(), match_nus.end(), std::greater<>());
            match_nus.erase(std::unique(match_nus.begin(), match_nus.end()), match_nus.end());
            std::map<double, std::vector<spectral::cplx>> known;
            for (const auto& sp : spectra) known[sp.nu] = sp.eigenvalues;
            const auto rep = spectral::resonance_convergence(map, match_nus, cfg.number("region"), N,
                                                             cfg.number("truncation_nu"), &known);
            std::vector<std::vector<double>> mrows;
            for (const auto& st : rep.steps) {
                mrows.push_back({st.nu_from, st.nu_to, static_cast<double>(st.count_from),
                                 static_cast<double>(st.count_to), st.max_displacement, st.boundary_crossing ? 1.0 : 0.0});
                if (st.nu_to == 0.5 * st.nu_from) sink.put("halving_displacement@" + nu_tag(st.nu_from), st.max_displacement);
                sink.put("region_count@" + nu_tag(st.nu_from), st.count_from);
            }
            sink.csv("matching.csv", "nu_from,nu_to,count_from,count_to,max_displacement,boundary_crossing", mrows);
            sink.csv("truncation.csv", "nu,N,displacement,stable",
                     {{rep.truncation_nu, static_cast<double>(N), rep.truncation_displacement,
                       rep.truncation_stable ? 1.0 : 0.0}});
            sink.put("truncation_displacement", rep.truncation_displacement);
            sink.put("truncation_stable", rep.truncation_stable);
            verdict << "resonances |mu|>=" << format_number(rep.region_radius) << " N vs 2N displacement "
                    << format_number(rep.truncation_displacement) << "\n";
        }
        sink.text("verdict.txt", verdict.str());
        return;
    }
    std::function<bool(int, int)> keep;
    spectral::VelocityField v;
    if (engine == "shear") {
        v = spectral::shear_flow();
        keep = [](int k1, int) { return k1 != 0; };
    }
    const auto rows = spectral::generator_gap_sweep(v, nus, N, keep, &spectra);
    write_gaps(sink, rows);
    for (const auto& sp : spectra) write_spectrum(sink, sp);
}

Eigen::MatrixXcd random_test_matrix(std::uint64_t seed, double beta, Eigen::MatrixXcd& projector) {
    rng::Stream s(seed, rng::StreamTag::Synthetic, 8);
    auto unif = [&] { return 2.0 * s.uniform() - 1.0; };
    Eigen::MatrixXcd S(8, 8);
    for (auto& x : S.reshaped()) x = spectral::cplx(unif(), unif());
    S += 3.0 * Eigen::MatrixXcd::Identity(8, 8);
    Eigen::VectorXcd d(8);
    d(0) = 0.0;
    for (int i = 1; i < 8; ++i) d(i) = spectral::cplx(beta + 0.5 + 1.5 * (unif() + 1.0), 1.2 * unif());
    const Eigen::MatrixXcd Si = S.inverse();
    projector = S.col(0) * Si.row(0);
    return S * d.asDiagonal() * Si;
}

void run_contour(const ExperimentConfig& cfg, Sink& sink) {
    std::vector<std::vector<double>> summary;
    double worst = 0.0;
    auto record = [&](const std::string& name, int case_id, double t, const spectral::ContourCheckResult& r) {
        std::vector<std::vector<double>> rows;
        for (const auto& smp : r.samples) rows.push_back({smp.lambda.real(), smp.lambda.imag(), smp.norm});
        sink.csv("contour_" + name + "_t" + nu_tag(t) + ".csv", "lambda_re,lambda_im,resolvent_norm", rows);
        summary.push_back({static_cast<double>(case_id), t, r.max_deviation, r.max_segment_resolvent,
                           static_cast<double>(r.levels), static_cast<double>(r.nodes_used)});
        sink.put("deviation_" + name + "@" + nu_tag(t), r.max_deviation);
        worst = std::max(worst, r.max_deviation);
    };
    const double beta = cfg.number("beta");
    for (const auto& name : cfg.words("cases")) {
        if (name == "diag2") {
            if (!(beta < 1.0)) throw ConfigError("contour.beta", "diag2 needs beta < 1");
            Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(2, 2);
            P(0, 0) = 1.0;
            P(1, 1) = 2.0;
            for (double t : cfg.list("times")) record(name, 0, t, spectral::semigroup_contour_check(P, t, {beta, 1.0}));
        } else if (name == "random8") {
            Eigen::MatrixXcd proj;
            const auto P = random_test_matrix(cfg.seed, beta, proj);
            for (double t : cfg.list("times")) {
                record(name, 1, t, spectral::semigroup_contour_check(P, t, {beta, 1.0}, {}, proj));
            }
        } else {
            const double nu = cfg.number("nu");
            const auto op = spectral::build_advection_diffusion_generator(spectral::shear_flow(), nu,
                                                                          static_cast<int>(cfg.integer("N")));
            Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(op.modes.size(), op.modes.size());
            proj(op.modes.zero(), op.modes.zero()) = 1.0;
            const double t = cfg.number("t_generator");
            record(name, 2, t,
                   spectral::semigroup_contour_check(op.matrix, t, {cfg.number("beta_generator"), nu}, {}, proj));
        }
    }
    sink.csv("summary_contour.csv", "case,t,deviation,max_segment_resolvent,levels,nodes", summary);
    sink.put("max_deviation", worst);
}

void run_lyapunov(const ExperimentConfig& cfg, Sink& sink) {
    std::vector<std::vector<double>> rows;
    const auto n = static_cast<std::size_t>(cfg.integer("samples"));
    auto add = [&](double eps, int system, const analysis::LyapunovEstimate& e, const std::string& key) {
        rows.push_back({static_cast<double>(system), eps, e.horizon, e.gamma, e.ci_lo, e.ci_hi, e.minimum,
                        static_cast<double>(e.samples)});
        sink.put("gamma_" + key, e.gamma);
        sink.put("ci_lo_" + key, e.ci_lo);
        sink.put("ci_hi_" + key, e.ci_hi);
        sink.put("minimum_" + key, e.minimum);
    };
    const double T = cfg.number("T");
    add(0.0, 0, analysis::lyapunov_bolza(T, n, cfg.seed), "bolza");
    add(0.0, 0, analysis::lyapunov_bolza(2.0 * T, n, member_seed(cfg.seed, 1)), "bolza_2T");
    const auto steps = static_cast<std::size_t>(cfg.integer("steps"));
    for (double eps : cfg.list("eps")) {
        const auto map = spectral::TorusMap::perturbed_cat(eps);
        add(eps, 1, analysis::lyapunov_map(map, steps, n, cfg.seed), "map@" + nu_tag(eps));
        add(eps, 1, analysis::lyapunov_map(map, 2 * steps, n, member_seed(cfg.seed, 2)), "map_2T@" + nu_tag(eps));
    }
    sink.csv("lyapunov.csv", "system,eps,horizon,gamma,ci_lo,ci_hi,minimum,samples", rows);
}

}  // namespace

const char* code_version() noexcept { return DLAB_VERSION; }

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string nu_tag(double nu) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", nu);
    return buf;
}

double RunManifest::value(const std::string& key) const {
    const auto it = summary.find(key);
    if (it == summary.end()) throw std::out_of_range("no result '" + key + "' in run " + kind);
    return it->second;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = kind;
    j["label"] = label;
    j["seed"] = seed;
    j["code_version"] = code_version;
    j["wall_seconds"] = wall_seconds;
    j["config"] = config;
    auto files_json = nlohmann::ordered_json::array();
    for (const auto& f : files) files_json.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    j["files"] = files_json;
    nlohmann::ordered_json s = nlohmann::ordered_json::object();
    for (const auto& [k, v] : summary) s[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json();
    j["summary"] = s;
    return j.dump(2) + "\n";
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EngineError("cannot read " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw EngineError("sha256 initialisation failed");
    }
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

RunManifest run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    if (out_dir.empty()) throw ConfigError("experiment.out", "no output directory given");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw ConfigError("experiment.out", "cannot create '" + out_dir + "'");
    const auto start = std::chrono::steady_clock::now();
    Sink sink(out_dir);
    try {
        if (cfg.kind == "mix") {
            run_mix(cfg, sink);
        } else if (cfg.kind == "decay") {
            run_decay(cfg, sink);
        } else if (cfg.kind == "correlate") {
            run_correlate(cfg, sink);
        } else if (cfg.kind == "spectrum") {
            run_spectrum(cfg, sink);
        } else if (cfg.kind == "contour") {
            run_contour(cfg, sink);
        } else if (cfg.kind == "lyapunov") {
            run_lyapunov(cfg, sink);
        } else {
            throw ConfigError("experiment.kind", "unknown experiment kind '" + cfg.kind + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const EngineError& e) {
        throw EngineError(cfg.kind + " experiment: " + e.what());
    }
    std::ostringstream summary_csv;
    summary_csv << "key,value\n";
    for (const auto& [k, v] : sink.summary()) summary_csv << k << "," << format_number(v) << "\n";
    sink.text("summary.csv", summary_csv.str());

    RunManifest m;
    m.kind = cfg.kind;
    m.label = cfg.label;
    m.seed = cfg.seed;
    m.code_version = code_version();
    m.out_dir = out_dir;
    m.config = cfg.params;
    m.summary = sink.summary();
    for (const auto& name : sink.names()) {
        const auto p = (fs::path(out_dir) / name).string();
        m.files.push_back({name, sha256_file(p), fs::file_size(p)});
    }
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::trunc);
    out << m.to_json();
    if (!out) throw EngineError("cannot write manifest.json");
    return m;
}

}  // namespace dlab::harness
