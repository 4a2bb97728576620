#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dlab::harness {

enum class ParamType { Number, Integer, List, Text, Bool };

struct ParamSpec {
    std::string key;
    ParamType type = ParamType::Number;
    std::string fallback;  // default as text
    double min = -1e300;   // inclusive bounds for numbers and list entries
    double max = 1e300;
    std::vector<std::string> choices;  // Text only; empty means free text
    std::string help;
};

// Experiment kinds: mix | decay | correlate | spectrum | contour | lyapunov.
const std::vector<std::string>& experiment_kinds();
// Parameters accepted in the section named after the kind.
const std::vector<ParamSpec>& kind_schema(const std::string& kind);

/// Parsed, validated configuration. Every parameter of the kind's schema is present
/// (defaults filled in) as canonical text.
struct ExperimentConfig {
    std::string kind;
    std::string label;
    std::uint64_t seed = 0;
    std::string out;  // may be empty; the CLI --out flag overrides
    std::map<std::string, std::string> params;

    double number(const std::string& key) const;
    long long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    std::vector<double> list(const std::string& key) const;
    std::vector<std::string> words(const std::string& key) const;
};

/// INI text with an [experiment] section (kind, seed, optional label and out) and one
/// section named after the kind. Unknown sections or keys, a missing seed, malformed or
/// out-of-range values throw ConfigError naming "section.key".
ExperimentConfig parse_config(const std::string& ini_text);
ExperimentConfig load_config(const std::string& path);

// Lists are comma-separated numbers or a range "start:step:stop" (stop included when hit
// to within 1e-9 step).
std::vector<double> parse_number_list(const std::string& field, const std::string& text);

}  // namespace dlab::harness
