// config_io.hpp - Flat `key = value` configuration files.
//
// Files hold values in laboratory units: frequencies as omega/2pi in MHz (or
// kHz for the Rydberg dephasing), lengths in um or mm, density in mm^-3.
// ConfigValues keeps those numbers verbatim; build_config() converts them to
// the internal rad/us / um units. Keeping the file-unit numbers as the source
// of truth makes serialize -> parse exact.
//
//   # comment
//   omega_mhz = 2.5      # sets omega1_mhz and omega2_mhz
//   zeta1_mhz = 0.7
//   mode      = shared   # shared | independent | meanfield

#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"

namespace rydeit {

/// Shortest decimal text that parses back to exactly `x`.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view text, double& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

struct ConfigValues {
    std::map<std::string, double> numbers;
    std::string mode = "shared";
};

/// Canonical keys in file order, with their defaults.
inline const std::vector<std::pair<std::string, double>>& canonical_keys() {
    static const std::vector<std::pair<std::string, double>> keys{
        {"omega1_mhz", 2.5},   {"omega2_mhz", 2.5},     {"gamma1_mhz", 3.0},  {"gamma2_mhz", 3.0},
        {"gamma_r1_khz", 10.0}, {"gamma_r2_khz", 10.0}, {"delta1_mhz", 0.0},  {"delta2_mhz", 0.0},
        {"Delta1_mhz", 0.0},   {"Delta2_mhz", 0.0},     {"zeta1_mhz", 0.1},   {"zeta2_mhz", 0.1},
        {"g1_0", 1.0},         {"g2_0", 1.0},           {"l_mm", 1.0},        {"r_um", 0.5},
        {"d_um", 0.5},         {"rb_um", 14.68},        {"rho_per_mm3", 1.5e8}, {"od", 43.5},
        {"c6_ghz_um6", 140.0},
    };
    return keys;
}

/// Shorthand keys that set both ensembles at once.
inline const std::map<std::string, std::pair<std::string, std::string>>& pair_aliases() {
    static const std::map<std::string, std::pair<std::string, std::string>> aliases{
        {"omega_mhz", {"omega1_mhz", "omega2_mhz"}},
        {"gamma_mhz", {"gamma1_mhz", "gamma2_mhz"}},
        {"gamma_r_khz", {"gamma_r1_khz", "gamma_r2_khz"}},
        {"delta_mhz", {"delta1_mhz", "delta2_mhz"}},
        {"Delta_mhz", {"Delta1_mhz", "Delta2_mhz"}},
        {"zeta_mhz", {"zeta1_mhz", "zeta2_mhz"}},
        {"g_0", {"g1_0", "g2_0"}},
    };
    return aliases;
}

inline ConfigValues default_config_values() {
    ConfigValues v;
    for (const auto& [key, value] : canonical_keys()) v.numbers[key] = value;
    return v;
}

inline bool is_known_key(const std::string& key) {
    if (key == "mode" || pair_aliases().count(key)) return true;
    for (const auto& [k, _] : canonical_keys())
        if (k == key) return true;
    return false;
}

/// Applies one `key = value` assignment. Throws `failure` for unknown keys or
/// unparsable values.
inline void set_value(ConfigValues& values, const std::string& key, std::string_view text,
                      ErrorCode failure = ErrorCode::BadConfig) {
    if (!is_known_key(key)) throw Error(failure, "unknown key '" + key + "'");
    if (key == "mode") {
        std::string mode(text);
        while (!mode.empty() && (mode.back() == ' ' || mode.back() == '\r')) mode.pop_back();
        while (!mode.empty() && mode.front() == ' ') mode.erase(mode.begin());
        try {
            values.mode = std::string(to_string(parse_mode(mode)));
        } catch (const Error&) {
            throw Error(failure, "bad mode '" + mode + "'");
        }
        return;
    }
    double x = 0.0;
    if (!parse_double(text, x)) throw Error(failure, "bad number for '" + key + "': '" + std::string(text) + "'");
    if (auto it = pair_aliases().find(key); it != pair_aliases().end()) {
        values.numbers[it->second.first] = x;
        values.numbers[it->second.second] = x;
    } else {
        values.numbers[key] = x;
    }
}

/// Parses `key = value` text on top of the defaults. Blank lines and `#`
/// comments are ignored.
inline ConfigValues parse_config_text(std::string_view text) {
    ConfigValues values = default_config_values();
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::BadConfig, "line " + std::to_string(line_no) + ": expected key = value");
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        try {
            set_value(values, key, std::string_view(line).substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorCode::BadConfig, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return values;
}

inline ConfigValues load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Canonical text form: every key, fixed order, shortest round-trip numbers.
inline std::string serialize_config(const ConfigValues& values) {
    std::string out;
    for (const auto& [key, fallback] : canonical_keys()) {
        const auto it = values.numbers.find(key);
        out += key + " = " + format_double(it != values.numbers.end() ? it->second : fallback) + "\n";
    }
    out += "mode = " + values.mode + "\n";
    return out;
}

/// Converts file units to a validated SimConfig.
inline SimConfig build_config(const ConfigValues& values) {
    auto get = [&](const std::string& key) {
        const auto it = values.numbers.find(key);
        if (it != values.numbers.end()) return it->second;
        for (const auto& [k, v] : canonical_keys())
            if (k == key) return v;
        throw Error(ErrorCode::BadConfig, "missing key '" + key + "'");
    };
    PhysicsParams p;
    ProbeInput probe;
    for (int a = 0; a < 2; ++a) {
        const std::string i = std::to_string(a + 1);
        p.omega[a] = mhz(get("omega" + i + "_mhz"));
        p.gamma[a] = mhz(get("gamma" + i + "_mhz"));
        p.gamma_r[a] = khz(get("gamma_r" + i + "_khz"));
        p.delta[a] = mhz(get("delta" + i + "_mhz"));
        p.control_detuning[a] = mhz(get("Delta" + i + "_mhz"));
        probe.zeta0[a] = mhz(get("zeta" + i + "_mhz"));
        probe.g0[a] = get("g" + i + "_0");
    }
    Geometry geom;
    geom.length_um = get("l_mm") * 1000.0;
    geom.radius_um = get("r_um");
    geom.separation_um = get("d_um");
    geom.blockade_radius_um = get("rb_um");
    geom.density_per_um3 = get("rho_per_mm3") / 1e9;
    geom.optical_depth = get("od");
    geom.c6_ghz_um6 = get("c6_ghz_um6");
    return validate_config(p, geom, probe, parse_mode(values.mode));
}

/// File-unit view of a SimConfig (inverse of build_config up to rounding).
inline ConfigValues config_values_from(const SimConfig& c) {
    ConfigValues v;
    for (int a = 0; a < 2; ++a) {
        const std::string i = std::to_string(a + 1);
        v.numbers["omega" + i + "_mhz"] = to_mhz(c.params.omega[a]);
        v.numbers["gamma" + i + "_mhz"] = to_mhz(c.params.gamma[a]);
        v.numbers["gamma_r" + i + "_khz"] = to_mhz(c.params.gamma_r[a]) * 1e3;
        v.numbers["delta" + i + "_mhz"] = to_mhz(c.params.delta[a]);
        v.numbers["Delta" + i + "_mhz"] = to_mhz(c.params.control_detuning[a]);
        v.numbers["zeta" + i + "_mhz"] = to_mhz(c.probe.zeta0[a]);
        v.numbers["g" + i + "_0"] = c.probe.g0[a];
    }
    v.numbers["l_mm"] = c.geometry.length_um / 1000.0;
    v.numbers["r_um"] = c.geometry.radius_um;
    v.numbers["d_um"] = c.geometry.separation_um;
    v.numbers["rb_um"] = c.geometry.blockade_radius_um;
    v.numbers["rho_per_mm3"] = c.geometry.density_per_um3 * 1e9;
    v.numbers["od"] = c.geometry.optical_depth;
    v.numbers["c6_ghz_um6"] = c.geometry.c6_ghz_um6;
    v.mode = std::string(to_string(c.mode));
    return v;
}

}  // namespace rydeit
