#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dlab/harness/config.hpp"

namespace dlab::harness {

struct OutputFile {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string kind;
    std::string label;
    std::uint64_t seed = 0;
    std::string code_version;
    double wall_seconds = 0.0;
    std::string out_dir;
    std::map<std::string, std::string> config;
    std::vector<OutputFile> files;
    // Scalar results keyed "name" or "name@nu"; also written to summary.csv.
    std::map<std::string, double> summary;

    double value(const std::string& key) const;  // throws std::out_of_range with the key
    std::string to_json() const;
};

const char* code_version() noexcept;

/// Runs the experiment, writing CSVs and manifest.json into out_dir (created if needed).
/// CSV content depends only on the configuration and seed.
RunManifest run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

std::string sha256_file(const std::string& path);

// "%.17g"
std::string format_number(double x);
// Key suffix for per-nu results, "%g".
std::string nu_tag(double nu);

}  // namespace dlab::harness
