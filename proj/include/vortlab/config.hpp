#pragma once

#include "vortlab/errors.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vortlab {

/// Malformed configuration text; carries the 1-based line of the problem (0 if none).
class ConfigError : public PreconditionError {
public:
    ConfigError(const std::string& source, int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

// Grammar (one experiment per file):
//
//   file    := { line }
//   line    := blank | comment | section | pair
//   comment := '#' text            (also allowed after a value)
//   section := '[' kind ']'        (at most one; must match `experiment`)
//   pair    := key '=' value       (key: [A-Za-z0-9_]+, value: text up to '#')
//
// Keys before the section are global (experiment, seed, n, box_length, out_dir);
// keys after it are specific to the experiment kind. Lists are comma-separated.

enum class ExperimentKind {
    oseen_scaling,
    picard,
    continuous_dependence,
    bb_ratio_2d,
    bb_ratio_3d,
    gn_ratio,
    maxwell_strichartz,
    wave_fixture,
};

enum class ValueType { integer, real, real_list, integer_list, text, boolean };

struct KeySpec {
    std::string name;
    ValueType type;
    /// Empty means required for global keys and "unset" for kind keys.
    std::string default_value;
    std::string help;
};

struct KindSpec {
    ExperimentKind kind;
    std::string name;
    std::string summary;
    std::vector<KeySpec> keys;
};

const std::vector<KeySpec>& global_keys();
const std::vector<KindSpec>& experiment_kinds();
const KindSpec& kind_spec(ExperimentKind kind);

/// A fully resolved configuration: every key present, defaults applied, values typed-checked.
class ExperimentConfig {
public:
    ExperimentKind kind = ExperimentKind::oseen_scaling;
    std::string kind_name;
    std::uint64_t seed = 0;
    int n = 0;
    double box_length = 0.0;
    std::string out_dir;

    double real(const std::string& key) const;
    long integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    std::vector<double> real_list(const std::string& key) const;
    std::vector<int> integer_list(const std::string& key) const;
    /// True if the key holds the literal "auto".
    bool is_auto(const std::string& key) const;

    /// Resolved global keys.
    const std::map<std::string, std::string>& globals() const { return globals_; }
    /// Resolved kind-specific keys.
    const std::map<std::string, std::string>& section() const { return section_; }

    void set_out_dir(const std::string& dir);

private:
    friend ExperimentConfig parse_config(std::string_view, const std::string&);
    const std::string& raw(const std::string& key) const;

    std::map<std::string, std::string> globals_;
    std::map<std::string, std::string> section_;
};

/// Parses and type-checks; throws ConfigError with the offending line.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// "key = value" lines in grammar form, globals then the section.
std::string resolved_dump(const ExperimentConfig& cfg);

/// One line per kind with its required and optional keys.
std::string list_experiments();

} // namespace vortlab
