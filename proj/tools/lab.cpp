#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "dlab/errors.hpp"
#include "dlab/harness/config.hpp"
#include "dlab/harness/presets.hpp"
#include "dlab/harness/run.hpp"
#include "dlab/numerics.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kEngineExit = 3;

struct RunOptions {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out;
    int workers = 0;
};

int run_kind(const std::string& kind, const RunOptions& o) {
    using namespace dlab::harness;
    ExperimentConfig cfg = o.preset.empty() ? load_config(o.config) : preset_config(o.preset);
    if (cfg.kind != kind) {
        throw dlab::ConfigError("experiment.kind", "config is a '" + cfg.kind + "' experiment, not '" + kind + "'");
    }
    if (o.seed) cfg.seed = *o.seed;
    const std::string out = !o.out.empty() ? o.out : cfg.out;
    if (o.workers > 0) dlab::set_default_workers(o.workers);
    const auto m = run_experiment(cfg, out);
    std::cout << kind << (cfg.label.empty() ? "" : " (" + cfg.label + ")") << ": " << m.files.size()
              << " files + manifest.json in " << out << " (" << m.wall_seconds << " s)\n";
    for (const auto& [k, v] : m.summary) std::cout << "  " << k << " = " << format_number(v) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Experiment harness for stochastic flows on the Bolza surface and torus models"};
    app.require_subcommand(1);

    RunOptions opts;
    std::string show;
    for (const auto& kind : dlab::harness::experiment_kinds()) {
        auto* sub = app.add_subcommand(kind, "run a '" + kind + "' experiment");
        auto* cfg = sub->add_option("--config", opts.config, "INI configuration file");
        auto* pre = sub->add_option("--preset", opts.preset, "use a shipped preset instead of a file");
        cfg->excludes(pre);
        sub->add_option("--seed", opts.seed, "override the configured seed");
        sub->add_option("--out", opts.out, "output directory (overrides experiment.out)");
        sub->add_option("--workers", opts.workers, "worker threads (results do not depend on it)")
            ->check(CLI::Range(1, 1024));
        sub->callback([cfg, pre] {
            if (cfg->count() + pre->count() == 0) throw CLI::RequiredError("--config or --preset");
        });
    }
    auto* presets = app.add_subcommand("presets", "list shipped presets");
    presets->add_option("--show", show, "print the configuration of one preset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigExit;
    }

    try {
        if (presets->parsed()) {
            if (!show.empty()) {
                std::cout << dlab::harness::find_preset(show).ini;
            } else {
                for (const auto& p : dlab::harness::list_presets()) std::cout << p.name << "  " << p.description << "\n";
            }
            return 0;
        }
        for (auto* sub : app.get_subcommands()) return run_kind(sub->get_name(), opts);
    } catch (const dlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigExit;
    } catch (const std::exception& e) {
        std::cerr << "engine error: " << e.what() << "\n";
        return kEngineExit;
    }
    return 0;
}
