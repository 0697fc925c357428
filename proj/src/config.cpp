#include "disco/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "disco/errors.hpp"

namespace disco {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
    throw ConfigError(path + ":" + std::to_string(line) + ": " + what);
}

double to_double(const std::string& path, int line, const std::string& key,
                 const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        fail(path, line, key + ": expected a number, got '" + value + "'");
    }
    if (pos != value.size())
        fail(path, line, key + ": trailing characters after number in '" + value + "'");
    return v;
}

long long to_int(const std::string& path, int line, const std::string& key,
                 const std::string& value) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &pos);
    } catch (const std::exception&) {
        fail(path, line, key + ": expected an integer, got '" + value + "'");
    }
    if (pos != value.size())
        fail(path, line, key + ": trailing characters after integer in '" + value + "'");
    return v;
}

std::vector<double> to_list(const std::string& path, int line, const std::string& key,
                            const std::string& value) {
    std::vector<double> out;
    std::istringstream iss(value);
    std::string token;
    while (iss >> token) out.push_back(to_double(path, line, key, token));
    if (out.empty()) fail(path, line, key + ": expected at least one number");
    return out;
}

Eigen::Vector3d to_vec3(const std::string& path, int line, const std::string& key,
                        const std::string& value) {
    const std::vector<double> v = to_list(path, line, key, value);
    if (v.size() != 3)
        fail(path, line, key + ": expected exactly three numbers (x y z), got " +
                             std::to_string(v.size()));
    return {v[0], v[1], v[2]};
}

// Walk a few ulps around `guess` looking for a file-unit value whose forward
// conversion reproduces `internal` bitwise. The forward maps are smooth and
// monotone, so when a preimage exists it sits within a couple of ulps of the
// mathematical inverse.
template <typename Fwd>
double invert_bitwise(double internal, Fwd fwd, double guess) {
    if (fwd(guess) == internal) return guess;
    double up = guess;
    double down = guess;
    for (int i = 0; i < 64; ++i) {
        up = std::nextafter(up, std::numeric_limits<double>::infinity());
        if (fwd(up) == internal) return up;
        down = std::nextafter(down, -std::numeric_limits<double>::infinity());
        if (fwd(down) == internal) return down;
    }
    return guess;
}

} // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

double watts_to_dbm(double watts) {
    return invert_bitwise(watts, dbm_to_watts, 10.0 * std::log10(watts) + 30.0);
}
double linear_to_db(double linear) {
    return invert_bitwise(linear, db_to_linear, 10.0 * std::log10(linear));
}
double rad_to_deg(double rad) {
    return invert_bitwise(rad, deg_to_rad, rad * 180.0 / std::numbers::pi);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");

    ScenarioConfig cfg;

    // The reflection profile is assembled after the scan so partial overrides
    // of the default alphabet are re-validated as a whole.
    int dris_bits = cfg.dris.bits;
    std::vector<double> dris_phases = cfg.dris.phases;
    std::vector<double> dris_amps = cfg.dris.amplitudes;
    std::vector<double> dris_probs = cfg.dris.probs;
    bool dris_touched = false;
    int dris_line = 0;

    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;

        if (text.front() == '[') {
            if (text.back() != ']') fail(path, line, "unterminated section header");
            section = trim(text.substr(1, text.size() - 2));
            if (section != "system" && section != "geometry" && section != "dris" &&
                section != "sweep" && section != "run")
                fail(path, line, "unknown section '" + section + "'");
            continue;
        }
        if (section == "sweep" || section == "run") continue; // manifest metadata

        const auto eq = text.find('=');
        if (eq == std::string::npos)
            fail(path, line, "expected 'key = value', got '" + text + "'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) fail(path, line, "empty key");
        if (value.empty()) fail(path, line, key + ": empty value");
        if (section.empty())
            fail(path, line, "key '" + key + "' before any [section] header");

        if (section == "system") {
            if (key == "bs_antennas")
                cfg.n_b = static_cast<int>(to_int(path, line, key, value));
            else if (key == "rx_antennas")
                cfg.n_s = static_cast<int>(to_int(path, line, key, value));
            else if (key == "dris_h")
                cfg.n_d_h = static_cast<int>(to_int(path, line, key, value));
            else if (key == "dris_v")
                cfg.n_d_v = static_cast<int>(to_int(path, line, key, value));
            else if (key == "users")
                cfg.k_c = static_cast<int>(to_int(path, line, key, value));
            else if (key == "frame_symbols")
                cfg.frame_len = static_cast<int>(to_int(path, line, key, value));
            else if (key == "kappa")
                cfg.kappa = to_double(path, line, key, value);
            else if (key == "power_dbm")
                cfg.p0 = dbm_to_watts(to_double(path, line, key, value));
            else if (key == "wavelength_m")
                cfg.wavelength = to_double(path, line, key, value);
            else if (key == "spacing_ratio")
                cfg.spacing_ratio = to_double(path, line, key, value);
            else if (key == "rician_factor_db")
                cfg.rician_factor = db_to_linear(to_double(path, line, key, value));
            else if (key == "chi")
                cfg.chi = to_double(path, line, key, value);
            else if (key == "noise_comm_dbm")
                cfg.sigma2_c = dbm_to_watts(to_double(path, line, key, value));
            else if (key == "noise_sens_dbm")
                cfg.sigma2_s = dbm_to_watts(to_double(path, line, key, value));
            else if (key == "seed") {
                const long long v = to_int(path, line, key, value);
                if (v < 0) fail(path, line, "seed: must be nonnegative");
                cfg.seed = static_cast<std::uint64_t>(v);
            } else
                fail(path, line, "unknown key '" + key + "' in [system]");
        } else if (section == "geometry") {
            Geometry& g = cfg.geometry;
            if (key == "bs_pos")
                g.bs_pos = to_vec3(path, line, key, value);
            else if (key == "dris_pos")
                g.dris_pos = to_vec3(path, line, key, value);
            else if (key == "rx_pos")
                g.rx_pos = to_vec3(path, line, key, value);
            else if (key == "user_center")
                g.user_center = to_vec3(path, line, key, value);
            else if (key == "user_radius_m")
                g.user_radius = to_double(path, line, key, value);
            else if (key == "target_range_m")
                g.target_range = to_double(path, line, key, value);
            else if (key == "target_bearing_min_deg")
                g.bearing_min = deg_to_rad(to_double(path, line, key, value));
            else if (key == "target_bearing_max_deg")
                g.bearing_max = deg_to_rad(to_double(path, line, key, value));
            else
                fail(path, line, "unknown key '" + key + "' in [geometry]");
        } else { // dris
            dris_touched = true;
            dris_line = line;
            if (key == "bits")
                dris_bits = static_cast<int>(to_int(path, line, key, value));
            else if (key == "phases_deg") {
                dris_phases = to_list(path, line, key, value);
                for (double& p : dris_phases) p = deg_to_rad(p);
            } else if (key == "amplitudes")
                dris_amps = to_list(path, line, key, value);
            else if (key == "probs")
                dris_probs = to_list(path, line, key, value);
            else
                fail(path, line, "unknown key '" + key + "' in [dris]");
        }
    }
    if (in.bad()) throw IoError("read error on config file '" + path + "'");

    if (dris_touched) {
        try {
            cfg.dris = DrisProfile::make(dris_bits, dris_phases, dris_amps, dris_probs);
        } catch (const ConfigError& e) {
            fail(path, dris_line, std::string("[dris] profile: ") + e.what());
        }
    }

    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return cfg;
}

namespace {

std::vector<std::string> to_names(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream iss(value);
    std::string token;
    while (iss >> token) out.push_back(token);
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::optional<SweepSpec> load_sweep_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");

    SweepSpec spec;
    spec.metrics.clear();
    spec.benchmarks.clear();
    bool present = false;

    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        if (text.front() == '[') {
            if (text.back() != ']') fail(path, line, "unterminated section header");
            section = trim(text.substr(1, text.size() - 2));
            continue;
        }
        if (section != "sweep") continue;

        present = true;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            fail(path, line, "expected 'key = value', got '" + text + "'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (value.empty()) fail(path, line, key + ": empty value");

        if (key == "axis") {
            try {
                spec.axis = parse_axis(value);
            } catch (const ConfigError& e) {
                fail(path, line, e.what());
            }
        } else if (key == "values") {
            spec.values = to_list(path, line, key, value);
        } else if (key == "trials") {
            spec.trials = static_cast<int>(to_int(path, line, key, value));
        } else if (key == "dt_redraws") {
            spec.dt_redraws = static_cast<int>(to_int(path, line, key, value));
        } else if (key == "metrics") {
            spec.metrics.clear();
            for (const std::string& name : to_names(value)) {
                try {
                    spec.metrics.push_back(parse_metric(name));
                } catch (const ConfigError& e) {
                    fail(path, line, e.what());
                }
            }
        } else if (key == "benchmarks") {
            spec.benchmarks.clear();
            for (const std::string& name : to_names(value)) {
                try {
                    spec.benchmarks.push_back(parse_benchmark(name));
                } catch (const ConfigError& e) {
                    fail(path, line, e.what());
                }
            }
        } else {
            fail(path, line, "unknown key '" + key + "' in [sweep]");
        }
    }
    if (in.bad()) throw IoError("read error on config file '" + path + "'");
    if (!present) return std::nullopt;
    return spec;
}

void write_config(std::ostream& os, const ScenarioConfig& cfg) {
    os << "[system]\n";
    os << "bs_antennas = " << cfg.n_b << "\n";
    os << "rx_antennas = " << cfg.n_s << "\n";
    os << "dris_h = " << cfg.n_d_h << "\n";
    os << "dris_v = " << cfg.n_d_v << "\n";
    os << "users = " << cfg.k_c << "\n";
    os << "frame_symbols = " << cfg.frame_len << "\n";
    os << "kappa = " << fmt(cfg.kappa) << "\n";
    os << "power_dbm = " << fmt(watts_to_dbm(cfg.p0)) << "\n";
    os << "wavelength_m = " << fmt(cfg.wavelength) << "\n";
    os << "spacing_ratio = " << fmt(cfg.spacing_ratio) << "\n";
    os << "rician_factor_db = " << fmt(linear_to_db(cfg.rician_factor)) << "\n";
    os << "chi = " << fmt(cfg.chi) << "\n";
    os << "noise_comm_dbm = " << fmt(watts_to_dbm(cfg.sigma2_c)) << "\n";
    os << "noise_sens_dbm = " << fmt(watts_to_dbm(cfg.sigma2_s)) << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "\n[geometry]\n";
    const Geometry& g = cfg.geometry;
    auto vec3 = [&](const char* key, const Eigen::Vector3d& v) {
        os << key << " = " << fmt(v.x()) << " " << fmt(v.y()) << " " << fmt(v.z()) << "\n";
    };
    vec3("bs_pos", g.bs_pos);
    vec3("dris_pos", g.dris_pos);
    vec3("rx_pos", g.rx_pos);
    vec3("user_center", g.user_center);
    os << "user_radius_m = " << fmt(g.user_radius) << "\n";
    os << "target_range_m = " << fmt(g.target_range) << "\n";
    os << "target_bearing_min_deg = " << fmt(rad_to_deg(g.bearing_min)) << "\n";
    os << "target_bearing_max_deg = " << fmt(rad_to_deg(g.bearing_max)) << "\n";
    os << "\n[dris]\n";
    os << "bits = " << cfg.dris.bits << "\n";
    auto list = [&](const char* key, const std::vector<double>& vs, bool deg) {
        os << key << " =";
        for (double v : vs) os << " " << fmt(deg ? rad_to_deg(v) : v);
        os << "\n";
    };
    list("phases_deg", cfg.dris.phases, true);
    list("amplitudes", cfg.dris.amplitudes, false);
    list("probs", cfg.dris.probs, false);
}

} // namespace disco
