#include "rabicd/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "rabicd/parallel.hpp"

namespace rabicd::cli {

namespace {

using VT = ValueType;

const std::vector<std::string> kBool{"true", "false"};

std::vector<KeySpec> build_keys() {
    return {
        // model
        {"gamma", VT::Real, "1", "qubit splitting Gamma = Omega/omega for single-point commands", {}},
        {"eta", VT::Real, "0.25", "coupling eta = g/omega for single-point commands", {}},
        {"gammas", VT::RealList, "1", "Gamma grid for sweeps", {}},
        {"etas", VT::RealList, "0.25", "eta grid for sweeps", {}},
        {"tau", VT::Real, "1", "ramp duration omega tau", {}},
        {"cutoff", VT::Integer, "0", "Fock cutoff n; 0 picks max(20, ceil(4 eta^2 + 10 eta) + 10) per cell", {}},
        {"schedule", VT::Text, "sin2sin2", "ramp profile", {"sin2sin2", "sin2"}},
        // metrics
        {"protocols", VT::TextList, "cd_free,coherent,superradiant,filtered",
         "sweep protocols: cd_free, dispersive, optimized, full_trace, coherent, superradiant, filtered", {}},
        {"metric", VT::Text, "superradiant", "metric for floquet and landscape",
         {"full_trace", "coherent", "superradiant", "filtered"}},
        {"filter_gamma", VT::Real, "0.001", "entry threshold of the filtered trace", {}},
        {"filter_mode", VT::Text, "magnitude", "filter test on entry magnitude or raw value", {"magnitude", "raw"}},
        {"spin_basis", VT::Text, "z", "spin states of the superradiant reference", {"z", "x"}},
        {"beta_inv_temp", VT::Real, "inf", "inverse temperature of the displaced reference", {}},
        {"commutator", VT::Text, "canonical", "commutator algebra used for G", {"canonical", "truncated"}},
        // optimizer
        {"slices", VT::Integer, "101", "time slices of metric coefficient trajectories", {}},
        {"grid_points", VT::Integer, "21", "coarse grid points per axis before the simplex", {}},
        {"bound", VT::Real, "5", "coefficient box |alpha| <= bound", {}},
        {"ftol", VT::Real, "1e-8", "simplex objective spread tolerance", {}},
        {"xtol", VT::Real, "1e-9", "simplex size tolerance for action slices", {}},
        {"fidelity_xtol", VT::Real, "1e-6", "simplex size tolerance for the fidelity search", {}},
        {"max_iterations", VT::Integer, "500", "simplex iteration limit", {}},
        {"lock_coefficients", VT::Boolean, "false", "force alpha_c = alpha_a", kBool},
        {"warm_start", VT::Boolean, "true", "seed each slice from the previous minimizer", kBool},
        {"search_steps", VT::Integer, "1000", "evolution steps per fidelity-search evaluation", {}},
        // evolution
        {"base_steps", VT::Integer, "1000", "evolution steps at the coarsest resolution", {}},
        {"step_tolerance", VT::Real, "1e-8", "final-state change accepted by step doubling", {}},
        {"max_doublings", VT::Integer, "6", "step doubling limit", {}},
        // floquet
        {"nu", VT::Real, "40", "drive frequency", {}},
        {"nu0", VT::Real, "1", "reference frequency", {}},
        {"beta", VT::RealList, "5,-15", "amplitudes of sin((2k-1) nu t)", {}},
        {"steps_per_period", VT::Integer, "200", "integrator steps per drive period", {}},
        {"samples_per_period", VT::Integer, "4", "observable samples per drive period", {}},
        // correlate
        {"corr_metrics", VT::TextList, "full_trace,coherent,filtered,superradiant", "metrics in the correlation study",
         {}},
        {"corr_points", VT::Integer, "15", "coefficient grid points per axis", {}},
        {"corr_lower", VT::Real, "-5", "coefficient grid lower edge", {}},
        {"corr_upper", VT::Real, "5", "coefficient grid upper edge", {}},
        {"corr_exclude_origin", VT::Boolean, "true", "drop (0,0) from the grid", kBool},
        {"quad_points", VT::Integer, "101", "quadrature nodes of the accumulated action", {}},
        {"corr_steps", VT::Integer, "1000", "evolution steps per correlation sample", {}},
        // landscape
        {"t_fraction", VT::Real, "0.5", "landscape slice time as a fraction of tau", {}},
        {"landscape_lower", VT::Real, "-5", "landscape lower edge on both axes", {}},
        {"landscape_upper", VT::Real, "5", "landscape upper edge on both axes", {}},
        {"landscape_points", VT::Integer, "41", "landscape points per axis", {}},
        // classify
        {"rwa_probe", VT::Text, "dynamic", "RWA breakdown test", {"dynamic", "ground"}},
        {"rwa_threshold", VT::Real, "0.9", "fidelity at or below which the RWA is broken", {}},
        // run
        {"output", VT::Text, "-", "output path, '-' for stdout", {}},
        {"format", VT::Text, "csv", "output format", {"csv", "json"}},
        {"workers", VT::Integer, "0", "parallel workers, 0 for hardware concurrency", {}},
    };
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t == "inf" || t == "+inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    if (t == "-inf") {
        out = -std::numeric_limits<double>::infinity();
        return true;
    }
    const char* first = t.data();
    if (!t.empty() && t[0] == '+') ++first;
    const auto res = std::from_chars(first, t.data() + t.size(), out);
    return !t.empty() && res.ec == std::errc() && res.ptr == t.data() + t.size() && !std::isnan(out);
}

bool parse_int(const std::string& s, int& out) {
    const std::string t = trim(s);
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    return !t.empty() && res.ec == std::errc() && res.ptr == t.data() + t.size();
}

std::vector<std::string> split_items(const std::string& text) {
    std::vector<std::string> items;
    std::string cur;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) items.push_back(cur);
    return items;
}

void check_value(const KeySpec& spec, const std::string& value) {
    auto bad = [&](const std::string& why) { throw ConfigError("key '" + spec.key + "': " + why); };
    switch (spec.type) {
        case VT::Real: {
            double d;
            if (!parse_double(value, d)) bad("expected a real number, got '" + value + "'");
            break;
        }
        case VT::Integer: {
            int i;
            if (!parse_int(value, i)) bad("expected an integer, got '" + value + "'");
            break;
        }
        case VT::RealList:
            try {
                parse_real_list(value);
            } catch (const ConfigError& e) {
                bad(e.what());
            }
            break;
        case VT::Boolean:
        case VT::Text:
        case VT::TextList: break;
    }
    if (!spec.choices.empty()) {
        const auto items = spec.type == VT::TextList ? parse_text_list(value) : std::vector<std::string>{value};
        for (const auto& it : items) {
            if (std::find(spec.choices.begin(), spec.choices.end(), it) == spec.choices.end()) {
                std::string all;
                for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
                bad("'" + it + "' is not one of {" + all + "}");
            }
        }
    }
}

}  // namespace

const std::vector<KeySpec>& config_keys() {
    static const std::vector<KeySpec> keys = build_keys();
    return keys;
}

const KeySpec& key_spec(const std::string& key) {
    for (const auto& k : config_keys())
        if (k.key == key) return k;
    throw ConfigError("unknown key '" + key + "'");
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_items(text)) {
        if (item.find(':') != std::string::npos) {
            std::vector<double> parts;
            std::stringstream ss(item);
            std::string p;
            while (std::getline(ss, p, ':')) {
                double d;
                if (!parse_double(p, d)) throw ConfigError("bad range '" + item + "'");
                parts.push_back(d);
            }
            if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) {
                throw ConfigError("range '" + item + "' must be start:step:stop with step > 0 and stop >= start");
            }
            const long long count = static_cast<long long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
            for (long long k = 0; k <= count; ++k) out.push_back(parts[0] + static_cast<double>(k) * parts[1]);
        } else {
            double d;
            if (!parse_double(item, d)) throw ConfigError("bad number '" + item + "'");
            out.push_back(d);
        }
    }
    return out;
}

std::vector<std::string> parse_text_list(const std::string& text) { return split_items(text); }

RunConfig::RunConfig() {
    for (const auto& k : config_keys()) {
        values_[k.key] = k.fallback;
        origins_[k.key] = "default";
    }
}

void RunConfig::set(const std::string& key, const std::string& value, const std::string& origin) {
    const KeySpec& spec = key_spec(key);
    const std::string v = trim(value);
    check_value(spec, v);
    values_[key] = v;
    origins_[key] = origin;
}

void RunConfig::set_assignment(const std::string& assignment, const std::string& origin) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected key=value, got '" + assignment + "'");
    try {
        set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1), origin);
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

void RunConfig::parse_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        try {
            set(trim(line.substr(0, eq)), line.substr(eq + 1), where);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    parse_text(ss.str(), path);
}

const std::string& RunConfig::raw(const std::string& key) const {
    key_spec(key);
    return values_.at(key);
}

const std::string& RunConfig::origin(const std::string& key) const {
    key_spec(key);
    return origins_.at(key);
}

double RunConfig::real(const std::string& key) const {
    double d = 0.0;
    parse_double(raw(key), d);
    return d;
}

int RunConfig::integer(const std::string& key) const {
    int i = 0;
    parse_int(raw(key), i);
    return i;
}

bool RunConfig::boolean(const std::string& key) const { return raw(key) == "true"; }

std::vector<double> RunConfig::reals(const std::string& key) const { return parse_real_list(raw(key)); }

std::vector<std::string> RunConfig::texts(const std::string& key) const { return parse_text_list(raw(key)); }

int RunConfig::workers() const {
    const int w = integer("workers");
    return w > 0 ? w : hardware_workers();
}

std::string RunConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

std::string RunConfig::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void apply_environment(RunConfig& cfg) {
    if (const char* w = std::getenv("RABICD_WORKERS"); w != nullptr && *w != '\0') {
        try {
            cfg.set("workers", w, "env RABICD_WORKERS");
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("RABICD_WORKERS: ") + e.what());
        }
    }
}

}  // namespace rabicd::cli
