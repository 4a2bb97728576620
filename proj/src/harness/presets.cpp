#include "dlab/harness/presets.hpp"

#include "dlab/errors.hpp"

namespace dlab::harness {

const std::vector<Preset>& list_presets() {
    static const std::vector<Preset> presets = {
        {"fig1", "evolution of a neighbourhood of (z=0, theta=pi/5) under the geodesic flow, 10^5 particles",
         R"([experiment]
kind = mix
label = fig1
seed = 1

[mix]
particles = 100000
delta = 0.5
z_re = 0
z_im = 0
theta = 0.62831853071795865
nu = 0
dt = 0.02
snapshots = 0,5,8
reference = true
)"},
        {"theorem-sweep", "flow-side L2 decay of a centred bump over the nu list, with fits and envelope checks",
         R"([experiment]
kind = decay
label = theorem-sweep
seed = 1

[decay]
engine = flow
nus = 0.1,0.03,0.01,0.003,0.001
times = 0:0.125:8
n_base = 4096
n_paths = 2
r0 = 1.4
fit_k = 3
c_env = 10
)"},
        {"mixing-rate", "correlation decay of a bump under the geodesic flow and its fitted rate",
         R"([experiment]
kind = correlate
label = mixing-rate
seed = 1

[correlate]
times = 0:0.25:8
n_samples = 200000
r0 = 1.4
fit_t0 = 1
fit_t1 = 6
)"},
        {"gap-sweep", "perturbed cat map: spectral gaps, decay-rate floor and resonance tracking over nu",
         R"([experiment]
kind = spectrum
label = gap-sweep
seed = 1

[spectrum]
engine = map
nus = 0.1,0.01,0.001,0.0001
N = 24
eps = 0.05
region = 0.3
matching = true
truncation_nu = 0.001
steps = 12
)"},
        {"shear-control", "shear-flow generator gaps on the k1 != 0 modes and their nu scaling",
         R"([experiment]
kind = spectrum
label = shear-control
seed = 1

[spectrum]
engine = shear
nus = 0.1,0.01,0.001,0.0001
N = 24
)"},
        {"diffusion-control", "pure diffusion on the torus: decay rate 4 pi^2 nu and the envelope negative control",
         R"([experiment]
kind = decay
label = diffusion-control
seed = 1

[decay]
engine = diffusion
nus = 0.1,0.01,0.001,0.0001
times = 0:0.125:6
N = 6
fit_k = 10
c_env = 10
)"},
        {"contour-check", "contour representation of the semigroup against the dense exponential",
         R"([experiment]
kind = contour
label = contour-check
seed = 1

[contour]
cases = diag2,random8,generator
times = 0.5,1,2
beta = 0.4
N = 16
nu = 0.05
beta_generator = 1
t_generator = 1
)"},
        {"lyapunov-suite", "Lyapunov exponents of the Bolza geodesic flow and the perturbed cat map",
         R"([experiment]
kind = lyapunov
label = lyapunov-suite
seed = 1

[lyapunov]
T = 40
samples = 64
steps = 2000
eps = 0,0.05
)"},
    };
    return presets;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : list_presets()) {
        if (p.name == name) return p;
    }
    throw ConfigError("preset", "unknown preset '" + name + "'");
}

ExperimentConfig preset_config(const std::string& name) { return parse_config(find_preset(name).ini); }

}  // namespace dlab::harness
