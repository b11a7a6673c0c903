#include "vortlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace vortlab {

namespace {

std::string trim(std::string_view s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    if (trim(s).empty()) {
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

bool parse_real(const std::string& s, double& out)
{
    if (s == "inf" || s == "+inf" || s == "infinity") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && first != last;
}

bool parse_integer(const std::string& s, long& out)
{
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

bool valid_value(ValueType type, const std::string& v)
{
    if (v == "auto") {
        return type == ValueType::real || type == ValueType::integer;
    }
    double d;
    long l;
    switch (type) {
    case ValueType::integer:
        return parse_integer(v, l);
    case ValueType::real:
        return parse_real(v, d);
    case ValueType::boolean:
        return v == "true" || v == "false";
    case ValueType::text:
        return !v.empty();
    case ValueType::real_list:
        for (const auto& item : split_list(v)) {
            if (!parse_real(item, d)) {
                return false;
            }
        }
        return true;
    case ValueType::integer_list:
        for (const auto& item : split_list(v)) {
            if (!parse_integer(item, l)) {
                return false;
            }
        }
        return true;
    }
    return false;
}

const char* type_name(ValueType type)
{
    switch (type) {
    case ValueType::integer:
        return "integer";
    case ValueType::real:
        return "real";
    case ValueType::real_list:
        return "list of reals";
    case ValueType::integer_list:
        return "list of integers";
    case ValueType::text:
        return "text";
    case ValueType::boolean:
        return "true/false";
    }
    return "?";
}

const KeySpec* find_key(const std::vector<KeySpec>& keys, const std::string& name)
{
    auto it = std::find_if(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.name == name; });
    return it == keys.end() ? nullptr : &*it;
}

std::vector<KeySpec> initial_data_keys()
{
    return {
        {"initial", ValueType::text, "dipole", "dipole | two-mode"},
        {"alpha", ValueType::real, "1", "circulation of each dipole vortex"},
        {"t_init", ValueType::real, "0.01", "Oseen age of the dipole vortices"},
        {"separation", ValueType::real, "auto", "dipole separation (auto: L/4)"},
        {"amplitude", ValueType::real, "0.05", "two-mode amplitude of cos(k0 x1) + cos(k0 x2)"},
    };
}

std::vector<KeySpec> solver_keys()
{
    return {
        {"t0", ValueType::real, "auto", "horizon (auto: c_lab / A0^2 by contraction halving)"},
        {"c_initial", ValueType::real, "1", "starting c_lab for automatic horizon"},
        {"t_max", ValueType::real, "1", "cap on the automatic horizon"},
        {"nt", ValueType::integer, "32", "stored time samples"},
        {"quad_m", ValueType::integer, "64", "Duhamel quadrature nodes"},
        {"tol_rel", ValueType::real, "1e-10", "fixed-point tolerance relative to A0"},
        {"max_iter", ValueType::integer, "100", "Picard iteration cap"},
    };
}

template <class... Lists>
std::vector<KeySpec> concat(Lists... lists)
{
    std::vector<KeySpec> out;
    (out.insert(out.end(), lists.begin(), lists.end()), ...);
    return out;
}

std::vector<KeySpec> family_keys(const char* beta, const char* band)
{
    return {
        {"beta", ValueType::real, beta, "spectral decay exponent"},
        {"count", ValueType::integer, "64", "family size"},
        {"band", ValueType::integer, band, "largest integer mode per axis"},
        {"refine_n", ValueType::integer_list, "", "extra resolutions for the refinement trace"},
    };
}

} // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : PreconditionError(line > 0 ? source + ":" + std::to_string(line) + ": " + what : source + ": " + what),
      line_(line)
{
}

const std::vector<KeySpec>& global_keys()
{
    static const std::vector<KeySpec> keys{
        {"experiment", ValueType::text, "", "experiment kind"},
        {"seed", ValueType::integer, "", "random seed / report suffix"},
        {"n", ValueType::integer, "", "grid points per axis (even, >= 8)"},
        {"box_length", ValueType::real, "6.283185307179586", "periodic box side L"},
        {"out_dir", ValueType::text, "results", "report directory"},
    };
    return keys;
}

const std::vector<KindSpec>& experiment_kinds()
{
    static const std::vector<KindSpec> kinds{
        {ExperimentKind::oseen_scaling,
         "oseen-scaling",
         "Lamb-Oseen norm scaling in t",
         {
             {"alpha", ValueType::real, "1", "circulation"},
             {"t_max", ValueType::real, "auto", "largest time (auto: (L/16)^2 / 4)"},
             {"decades", ValueType::real, "2", "decades of t below t_max"},
             {"t_count", ValueType::integer, "9", "geometrically spaced times"},
         }},
        {ExperimentKind::picard,
         "picard",
         "Picard solve of the mild vorticity equation",
         concat(initial_data_keys(), solver_keys(),
                std::vector<KeySpec>{{"compare_reference", ValueType::boolean, "true",
                                      "also run the reference stepper and report the difference"}})},
        {ExperimentKind::continuous_dependence,
         "continuous-dependence",
         "Solution difference against initial perturbation size",
         concat(initial_data_keys(), solver_keys(),
                std::vector<KeySpec>{
                    {"eps_list", ValueType::real_list, "1e-2,1e-3,1e-4", "perturbation amplitudes"},
                    {"bump_width", ValueType::real, "auto", "Gaussian bump width (auto: L/16)"},
                })},
        {ExperimentKind::bb_ratio_2d, "bb-ratio-2d", "(|v|_inf + |grad v|_2) / |grad w|_1 family",
         family_keys("2", "16")},
        {ExperimentKind::bb_ratio_3d, "bb-ratio-3d", "(|v|_3 + |grad v|_3/2) / |curl w|_1 family",
         family_keys("2", "6")},
        {ExperimentKind::gn_ratio, "gn-ratio", "|w|_2 / |grad w|_1 family", family_keys("2", "16")},
        {ExperimentKind::maxwell_strichartz,
         "maxwell-strichartz",
         "Strichartz LHS / RHS over random wave fixtures",
         {
             {"q", ValueType::real, "4", "time exponent"},
             {"r", ValueType::real, "4", "space exponent"},
             {"qt", ValueType::real, "4", "source time exponent"},
             {"s", ValueType::real, "0.5", "Sobolev index"},
             {"k", ValueType::real, "0.75", "source derivative order"},
             {"count", ValueType::integer, "32", "fixtures"},
             {"beta", ValueType::real, "2", "spectral decay exponent"},
             {"band", ValueType::integer, "4", "largest integer mode per axis"},
             {"T", ValueType::real, "auto", "horizon (auto: L/4)"},
             {"nt", ValueType::integer, "64", "stored time samples"},
             {"substeps", ValueType::integer, "16", "source trapezoid sub-intervals per sample"},
             {"refine_n", ValueType::integer_list, "", "extra resolutions for the refinement trace"},
         }},
        {ExperimentKind::wave_fixture,
         "wave-fixture",
         "Closed-form forced wave and homogeneous invariants",
         {
             {"T", ValueType::real, "auto", "horizon (auto: L/4)"},
             {"nt", ValueType::integer, "128", "stored time samples"},
             {"substeps", ValueType::integer, "16", "source trapezoid sub-intervals per sample"},
             {"beta", ValueType::real, "2", "decay of the homogeneous random data"},
             {"band", ValueType::integer, "4", "band of the homogeneous random data"},
         }},
    };
    return kinds;
}

const KindSpec& kind_spec(ExperimentKind kind)
{
    for (const auto& k : experiment_kinds()) {
        if (k.kind == kind) {
            return k;
        }
    }
    throw PreconditionError("unknown experiment kind");
}

const std::string& ExperimentConfig::raw(const std::string& key) const
{
    if (auto it = section_.find(key); it != section_.end()) {
        return it->second;
    }
    if (auto it = globals_.find(key); it != globals_.end()) {
        return it->second;
    }
    throw PreconditionError("configuration has no key '" + key + "'");
}

double ExperimentConfig::real(const std::string& key) const
{
    double v = 0.0;
    if (!parse_real(raw(key), v)) {
        throw PreconditionError("key '" + key + "' is not a real number");
    }
    return v;
}

long ExperimentConfig::integer(const std::string& key) const
{
    long v = 0;
    if (!parse_integer(raw(key), v)) {
        throw PreconditionError("key '" + key + "' is not an integer");
    }
    return v;
}

bool ExperimentConfig::boolean(const std::string& key) const
{
    return raw(key) == "true";
}

const std::string& ExperimentConfig::text(const std::string& key) const
{
    return raw(key);
}

std::vector<double> ExperimentConfig::real_list(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& item : split_list(raw(key))) {
        double v = 0.0;
        parse_real(item, v);
        out.push_back(v);
    }
    return out;
}

std::vector<int> ExperimentConfig::integer_list(const std::string& key) const
{
    std::vector<int> out;
    for (const auto& item : split_list(raw(key))) {
        long v = 0;
        parse_integer(item, v);
        out.push_back(static_cast<int>(v));
    }
    return out;
}

bool ExperimentConfig::is_auto(const std::string& key) const
{
    return raw(key) == "auto";
}

void ExperimentConfig::set_out_dir(const std::string& dir)
{
    out_dir = dir;
    globals_["out_dir"] = dir;
}

ExperimentConfig parse_config(std::string_view text, const std::string& source)
{
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> globals, section;
    std::string section_name;
    int section_line = 0;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                throw ConfigError(source, lineno, "section header must end with ']'");
            }
            if (!section_name.empty()) {
                throw ConfigError(source, lineno, "only one experiment section is allowed");
            }
            section_name = trim(std::string_view(stripped).substr(1, stripped.size() - 2));
            section_line = lineno;
            if (section_name.empty()) {
                throw ConfigError(source, lineno, "empty section name");
            }
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source, lineno, "expected 'key = value'");
        }
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
            })) {
            throw ConfigError(source, lineno, "invalid key '" + key + "'");
        }
        auto& target = section_name.empty() ? globals : section;
        if (target.contains(key)) {
            throw ConfigError(source, lineno, "duplicate key '" + key + "'");
        }
        target[key] = {value, lineno};
    }

    ExperimentConfig cfg;
    for (const auto& [key, entry] : globals) {
        const KeySpec* spec = find_key(global_keys(), key);
        if (!spec) {
            throw ConfigError(source, entry.line, "unknown key '" + key + "'");
        }
        if (!valid_value(spec->type, entry.value)) {
            throw ConfigError(source, entry.line,
                              "key '" + key + "' expects " + type_name(spec->type) + ", got '" + entry.value + "'");
        }
    }
    for (const auto& spec : global_keys()) {
        auto it = globals.find(spec.name);
        if (it == globals.end()) {
            if (spec.default_value.empty()) {
                throw ConfigError(source, 0, "missing required key '" + spec.name + "'");
            }
            cfg.globals_[spec.name] = spec.default_value;
        } else {
            cfg.globals_[spec.name] = it->second.value;
        }
    }

    const std::string& kind_name = cfg.globals_.at("experiment");
    const KindSpec* kind = nullptr;
    for (const auto& k : experiment_kinds()) {
        if (k.name == kind_name) {
            kind = &k;
        }
    }
    if (!kind) {
        throw ConfigError(source, globals.at("experiment").line, "unknown experiment kind '" + kind_name + "'");
    }
    if (!section_name.empty() && section_name != kind_name) {
        throw ConfigError(source, section_line,
                          "section [" + section_name + "] does not match experiment '" + kind_name + "'");
    }
    for (const auto& [key, entry] : section) {
        const KeySpec* spec = find_key(kind->keys, key);
        if (!spec) {
            throw ConfigError(source, entry.line, "unknown key '" + key + "' for " + kind_name);
        }
        if (!valid_value(spec->type, entry.value)) {
            throw ConfigError(source, entry.line,
                              "key '" + key + "' expects " + type_name(spec->type) + ", got '" + entry.value + "'");
        }
    }
    for (const auto& spec : kind->keys) {
        auto it = section.find(spec.name);
        cfg.section_[spec.name] = it == section.end() ? spec.default_value : it->second.value;
    }

    cfg.kind = kind->kind;
    cfg.kind_name = kind->name;
    const long seed = cfg.integer("seed");
    if (seed < 0) {
        throw ConfigError(source, globals.at("seed").line, "seed must be nonnegative");
    }
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.n = static_cast<int>(cfg.integer("n"));
    if (cfg.n < 8 || cfg.n % 2 != 0) {
        throw ConfigError(source, globals.at("n").line, "n must be even and ≥ 8");
    }
    cfg.box_length = cfg.real("box_length");
    if (!(cfg.box_length > 0.0) || std::isinf(cfg.box_length)) {
        throw ConfigError(source, globals.contains("box_length") ? globals.at("box_length").line : 0,
                          "box_length must be positive and finite");
    }
    cfg.out_dir = cfg.globals_.at("out_dir");
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "cannot read configuration file");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string resolved_dump(const ExperimentConfig& cfg)
{
    std::ostringstream out;
    for (const auto& spec : global_keys()) {
        out << spec.name << " = " << cfg.globals().at(spec.name) << '\n';
    }
    out << '[' << cfg.kind_name << "]\n";
    for (const auto& spec : kind_spec(cfg.kind).keys) {
        out << spec.name << " = " << cfg.section().at(spec.name) << '\n';
    }
    return out.str();
}

std::string list_experiments()
{
    std::ostringstream out;
    out << "required global keys:";
    for (const auto& k : global_keys()) {
        if (k.default_value.empty()) {
            out << ' ' << k.name;
        }
    }
    out << '\n';
    for (const auto& kind : experiment_kinds()) {
        out << kind.name << " - " << kind.summary << "\n  keys:";
        for (const auto& k : kind.keys) {
            out << ' ' << k.name << '=' << (k.default_value.empty() ? "(none)" : k.default_value);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace vortlab
