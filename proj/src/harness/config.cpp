#include "dlab/harness/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dlab/errors.hpp"

namespace dlab::harness {

namespace {

using P = ParamType;
constexpr double kBig = 1e300;

const std::map<std::string, std::vector<ParamSpec>>& schemas() {
    static const std::map<std::string, std::vector<ParamSpec>> s = {
        {"mix",
         {{"particles", P::Integer, "100000", 1, 1e8, {}, "ensemble size"},
          {"delta", P::Number, "0.5", 1e-6, 1.5, {}, "radius of the initial neighbourhood in the Lie algebra"},
          {"z_re", P::Number, "0", -0.8, 0.8, {}, "base point of the neighbourhood (disk)"},
          {"z_im", P::Number, "0", -0.8, 0.8, {}, ""},
          {"theta", P::Number, "0.62831853071795865", -100, 100, {}, "direction angle"},
          {"nu", P::Number, "0", 0, 10, {}, "diffusion strength"},
          {"dt", P::Number, "0.02", 1e-6, 0.05, {}, "time step"},
          {"snapshots", P::List, "0,5,8", 0, 1e4, {}, "snapshot times"},
          {"reference", P::Bool, "true", 0, 0, {}, "also score an independent uniform ensemble"}}},
        {"decay",
         {{"engine", P::Text, "flow", 0, 0, {"flow", "map", "diffusion"}, "curve source"},
          {"nus", P::List, "0.1,0.03,0.01,0.003,0.001", 1e-12, 0.36, {}, "strictly decreasing nu list"},
          {"times", P::List, "0:0.25:12", 0, 1e6, {}, "flow/diffusion sample times (diffusion: in units of 1/(4 pi^2 nu))"},
          {"n_base", P::Integer, "4096", 2, 1e8, {}, "flow: base points per time"},
          {"n_paths", P::Integer, "2", 2, 1e4, {}, "flow: paths per base point"},
          {"r0", P::Number, "1.4", 1e-3, 1.52, {}, "flow: bump radius"},
          {"dt", P::Number, "0", 0, 0.05, {}, "flow: time step (0 = default)"},
          {"N", P::Integer, "16", 4, 64, {}, "map/diffusion: Fourier truncation"},
          {"eps", P::Number, "0.05", 0, 0.2, {}, "map: perturbation amplitude"},
          {"steps", P::Integer, "12", 6, 1000, {}, "map: iterations"},
          {"fit_k", P::Number, "10", 1, 1e6, {}, "fit window ends before value < fit_k * stderr"},
          {"c_env", P::Number, "10", 1, 1e12, {}, "envelope constant"},
          {"c_poinc", P::Number, "1", 0, 1e6, {}, "short-time constant"},
          {"c_short", P::Number, "1", 0, 1e6, {}, "short-time horizon in units of log(1/nu)"}}},
        {"correlate",
         {{"times", P::List, "0:0.25:8", 0, 1e6, {}, "sample times"},
          {"n_samples", P::Integer, "200000", 2, 1e9, {}, "uniform samples per time"},
          {"r0", P::Number, "1.4", 1e-3, 1.52, {}, "bump radius of f = g"},
          {"fit_t0", P::Number, "1", 0, 1e6, {}, "fit window start"},
          {"fit_t1", P::Number, "6", 0, 1e6, {}, "fit window end"}}},
        {"spectrum",
         {{"engine", P::Text, "map", 0, 0, {"map", "shear", "diffusion"}, "operator family"},
          {"nus", P::List, "0.1,0.01,0.001,0.0001", 1e-12, 10, {}, "strictly decreasing nu list"},
          {"N", P::Integer, "24", 4, 48, {}, "Fourier truncation"},
          {"eps", P::Number, "0.05", 0, 0.2, {}, "map: perturbation amplitude"},
          {"region", P::Number, "0.3", 1e-6, 1, {}, "map: resonance region |mu| >= region"},
          {"matching", P::Bool, "true", 0, 0, {}, "map: run the resonance matching sweep"},
          {"truncation_nu", P::Number, "0.001", 1e-12, 10, {}, "map: nu for the N vs 2N matching check"},
          {"steps", P::Integer, "12", 6, 1000, {}, "map: decay-curve iterations for the rate sweep"}}},
        {"contour",
         {{"cases", P::Text, "diag2,random8,generator", 0, 0, {}, "subset of diag2, random8, generator"},
          {"times", P::List, "0.5,1,2", 1e-6, 1e3, {}, "times for the matrix cases"},
          {"beta", P::Number, "0.5", 0, 1e3, {}, "segment abscissa for the matrix cases"},
          {"N", P::Integer, "16", 4, 32, {}, "generator: truncation"},
          {"nu", P::Number, "0.05", 1e-4, 1, {}, "generator: viscosity (also the contour height parameter)"},
          {"beta_generator", P::Number, "1", 0, 1e3, {}, "generator: segment abscissa"},
          {"t_generator", P::Number, "1", 1e-6, 1e3, {}, "generator: time"}}},
        {"lyapunov",
         {{"T", P::Number, "40", 20, 1e6, {}, "flow horizon"},
          {"samples", P::Integer, "64", 2, 1e7, {}, "initial conditions"},
          {"steps", P::Integer, "2000", 1000, 1e9, {}, "map horizon"},
          {"eps", P::List, "0,0.05", 0, 0.2, {}, "map perturbation amplitudes"}}},
    };
    return s;
}

std::string trim(std::string s) {
    boost::algorithm::trim(s);
    return s;
}

double to_number(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError(field, "expected a number, got an empty value");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(field, "expected a finite number, got '" + t + "'");
    }
    return v;
}

void check_bounds(const std::string& field, const ParamSpec& spec, double v) {
    if (v < spec.min || v > spec.max) {
        std::ostringstream os;
        os << "value " << v << " outside [" << spec.min << ", " << spec.max << "]";
        throw ConfigError(field, os.str());
    }
}

// Canonical text for a validated value.
std::string canonical(const std::string& field, const ParamSpec& spec, const std::string& raw) {
    const std::string t = trim(raw);
    switch (spec.type) {
        case P::Number: {
            const double v = to_number(field, t);
            check_bounds(field, spec, v);
            return t;
        }
        case P::Integer: {
            const double v = to_number(field, t);
            if (v != std::floor(v)) throw ConfigError(field, "expected an integer, got '" + t + "'");
            check_bounds(field, spec, v);
            return std::to_string(static_cast<long long>(v));
        }
        case P::List: {
            const auto xs = parse_number_list(field, t);
            for (double v : xs) check_bounds(field, spec, v);
            return t;
        }
        case P::Bool: {
            const std::string l = boost::algorithm::to_lower_copy(t);
            if (l == "true" || l == "1" || l == "yes") return "true";
            if (l == "false" || l == "0" || l == "no") return "false";
            throw ConfigError(field, "expected true or false, got '" + t + "'");
        }
        case P::Text:
            if (!spec.choices.empty() &&
                std::find(spec.choices.begin(), spec.choices.end(), t) == spec.choices.end()) {
                throw ConfigError(field, "unknown value '" + t + "'");
            }
            return t;
    }
    return t;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> k{"mix", "decay", "correlate", "spectrum", "contour", "lyapunov"};
    return k;
}

const std::vector<ParamSpec>& kind_schema(const std::string& kind) {
    const auto it = schemas().find(kind);
    if (it == schemas().end()) throw ConfigError("experiment.kind", "unknown experiment kind '" + kind + "'");
    return it->second;
}

std::vector<double> parse_number_list(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    std::vector<double> out;
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        boost::algorithm::split(parts, t, boost::is_any_of(":"));
        if (parts.size() != 3) throw ConfigError(field, "range must be start:step:stop");
        const double a = to_number(field, parts[0]), h = to_number(field, parts[1]), b = to_number(field, parts[2]);
        if (!(h > 0.0) || b < a) throw ConfigError(field, "range needs step > 0 and stop >= start");
        const double count = std::floor((b - a) / h + 1e-9);
        if (count > 1e6) throw ConfigError(field, "range too long");
        for (long long k = 0; k <= static_cast<long long>(count); ++k) out.push_back(a + static_cast<double>(k) * h);
    } else {
        std::vector<std::string> parts;
        boost::algorithm::split(parts, t, boost::is_any_of(","));
        for (const auto& p : parts) out.push_back(to_number(field, p));
    }
    if (out.empty()) throw ConfigError(field, "empty list");
    return out;
}

ExperimentConfig parse_config(const std::string& ini_text) {
    boost::property_tree::ptree tree;
    try {
        std::istringstream in(ini_text);
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config", std::string("malformed INI: ") + e.message() + " at line " +
                                        std::to_string(e.line()));
    }
    const auto exp = tree.get_child_optional("experiment");
    if (!exp) throw ConfigError("experiment", "missing [experiment] section");
    ExperimentConfig cfg;
    bool has_seed = false;
    for (const auto& [key, node] : *exp) {
        const std::string field = "experiment." + key;
        const std::string v = trim(node.data());
        if (key == "kind") {
            cfg.kind = v;
        } else if (key == "label") {
            cfg.label = v;
        } else if (key == "out") {
            cfg.out = v;
        } else if (key == "seed") {
            if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
                throw ConfigError(field, "seed must be a nonnegative integer");
            }
            errno = 0;
            cfg.seed = std::strtoull(v.c_str(), nullptr, 10);
            if (errno == ERANGE) throw ConfigError(field, "seed does not fit in 64 bits");
            has_seed = true;
        } else {
            throw ConfigError(field, "unknown key");
        }
    }
    if (cfg.kind.empty()) throw ConfigError("experiment.kind", "missing experiment kind");
    if (!has_seed) throw ConfigError("experiment.seed", "seed is mandatory");
    const auto& schema = kind_schema(cfg.kind);
    for (const auto& [section, node] : tree) {
        if (section != "experiment" && section != cfg.kind) {
            throw ConfigError(section, "unexpected section for kind '" + cfg.kind + "'");
        }
    }
    std::map<std::string, std::string> given;
    if (const auto sec = tree.get_child_optional(cfg.kind)) {
        for (const auto& [key, node] : *sec) {
            const std::string field = cfg.kind + "." + key;
            if (std::none_of(schema.begin(), schema.end(), [&](const ParamSpec& p) { return p.key == key; })) {
                throw ConfigError(field, "unknown key");
            }
            if (given.count(key)) throw ConfigError(field, "duplicate key");
            given[key] = node.data();
        }
    }
    for (const auto& spec : schema) {
        const auto it = given.find(spec.key);
        cfg.params[spec.key] = canonical(cfg.kind + "." + spec.key, spec, it == given.end() ? spec.fallback : it->second);
    }
    // Cross-field rules.
    for (const char* key : {"nus"}) {
        if (!cfg.params.count(key)) continue;
        const auto xs = cfg.list(key);
        for (std::size_t i = 1; i < xs.size(); ++i) {
            if (!(xs[i] < xs[i - 1])) throw ConfigError(cfg.kind + "." + key, "nu list must strictly decrease");
        }
    }
    for (const char* key : {"times", "snapshots"}) {
        if (!cfg.params.count(key)) continue;
        const auto xs = cfg.list(key);
        for (std::size_t i = 1; i < xs.size(); ++i) {
            if (!(xs[i] > xs[i - 1])) throw ConfigError(cfg.kind + "." + key, "times must strictly increase");
        }
    }
    if (cfg.kind == "correlate" && !(cfg.number("fit_t1") > cfg.number("fit_t0"))) {
        throw ConfigError("correlate.fit_t1", "fit window must have fit_t1 > fit_t0");
    }
    if (cfg.kind == "contour") {
        for (const auto& w : cfg.words("cases")) {
            if (w != "diag2" && w != "random8" && w != "generator") {
                throw ConfigError("contour.cases", "unknown case '" + w + "'");
            }
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

double ExperimentConfig::number(const std::string& key) const { return to_number(kind + "." + key, text(key)); }

long long ExperimentConfig::integer(const std::string& key) const {
    return static_cast<long long>(to_number(kind + "." + key, text(key)));
}

bool ExperimentConfig::flag(const std::string& key) const { return text(key) == "true"; }

const std::string& ExperimentConfig::text(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError(kind + "." + key, "parameter not defined for this kind");
    return it->second;
}

std::vector<double> ExperimentConfig::list(const std::string& key) const {
    return parse_number_list(kind + "." + key, text(key));
}

std::vector<std::string> ExperimentConfig::words(const std::string& key) const {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, text(key), boost::is_any_of(","));
    std::vector<std::string> out;
    for (auto& p : parts) {
        p = trim(p);
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

}  // namespace dlab::harness
