#include "slp/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "slp/errors.hpp"

namespace slp {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

const std::set<std::string> direct_keys{"g", "omega_plus", "omega_minus", "m_atom"};
const std::set<std::string> scale_keys{"v_gr", "l_abs", "v_rec", "tan_phi", "delta"};

} // namespace

const std::set<std::string>& Config::vocabulary() {
    static const std::set<std::string> keys{
        // medium, direct form
        "g", "n", "gamma", "delta_plus", "delta_minus", "omega_plus", "omega_minus", "k_p",
        "m_atom", "delta_kerr", "rho_dsp",
        // medium, scale form
        "v_gr", "l_abs", "v_rec", "tan_phi", "delta",
        // pulse
        "pulse_length", "pulse_time", "adiabatic_factor", "time_inequality",
        // dispersion / mass
        "k_max_l_abs", "k_points", "k_perp", "lossless", "fit_window_l_abs", "fit_points",
        // emission
        "temperature", "t_over_tc", "envelope_factor", "profile_half_extent", "profile_points",
        // evolution
        "nx", "ny", "nz", "box_x", "box_y", "box_z", "dt", "t_final", "elastic",
        "dispersive_shift", "nonlinear_loss", "high_k_absorption", "interaction_sign",
        "release_time", "release_direction", "initial", "initial_width_x", "initial_width_y",
        "initial_width_z", "initial_number", "initial_density", "initial_k_z",
        "initial_snapshot", "noise", "seed", "record_every"};
    return keys;
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << origin << ":" << number << ": expected 'key = value'";
            throw ConfigError(msg.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::ostringstream where;
        where << origin << ":" << number << ": ";
        if (key.empty() || value.empty())
            throw ConfigError(where.str() + "empty key or value");
        if (!vocabulary().count(key))
            throw ConfigError(where.str() + "unknown key '" + key + "'");
        if (!cfg.values_.emplace(key, value).second)
            throw ConfigError(where.str() + "duplicate key '" + key + "'");
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

const std::string& Config::raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError(origin_ + ": missing required key '" + key + "'");
    used_.insert(key);
    return it->second;
}

double Config::number(const std::string& key) const {
    const std::string& value = raw(key);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw ConfigError(origin_ + ": key '" + key + "' is not a finite number: '" + value + "'");
    return v;
}

double Config::number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::optional<double> Config::optional_number(const std::string& key) const {
    if (!has(key))
        return std::nullopt;
    return number(key);
}

std::size_t Config::count(const std::string& key, std::size_t fallback) const {
    if (!has(key))
        return fallback;
    const double v = number(key);
    if (v < 0.0 || v != std::floor(v) || v > 1e12)
        throw ConfigError(origin_ + ": key '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool Config::flag(const std::string& key, bool fallback) const {
    if (!has(key))
        return fallback;
    const std::string& v = raw(key);
    if (v == "true" || v == "1" || v == "on" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "off" || v == "no")
        return false;
    throw ConfigError(origin_ + ": key '" + key + "' must be a boolean, got '" + v + "'");
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
    return has(key) ? raw(key) : fallback;
}

void Config::set(const std::string& key, const std::string& value) {
    if (!vocabulary().count(key))
        throw ConfigError("unknown key '" + key + "'");
    values_[key] = value;
}

std::vector<std::string> Config::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_)
        if (!used_.count(key))
            out.push_back(key);
    return out;
}

MediumParams load_medium(const Config& cfg) {
    bool any_direct = false, any_scale = false;
    for (const auto& k : direct_keys)
        any_direct = any_direct || cfg.has(k);
    for (const auto& k : scale_keys)
        any_scale = any_scale || cfg.has(k);
    if (any_direct && any_scale)
        throw ConfigError("medium given both directly (g, omega_*, m_atom) and via scales "
                          "(v_gr, l_abs, v_rec, tan_phi, delta); choose one form");

    if (any_scale) {
        if (cfg.has("delta_plus") || cfg.has("delta_minus"))
            throw ConfigError("scale form uses 'delta' for both detunings");
        ScaleTargets t;
        t.v_gr = cfg.number("v_gr");
        t.l_abs = cfg.number("l_abs");
        t.v_rec = cfg.number("v_rec");
        t.tan_phi = cfg.number("tan_phi", 1.0);
        t.n = cfg.number("n");
        t.gamma = cfg.number("gamma");
        t.delta = cfg.number("delta");
        t.k_p = cfg.number("k_p");
        t.delta_kerr = cfg.number("delta_kerr", 0.0);
        t.rho_dsp = cfg.number("rho_dsp", 0.0);
        return params_from_scales(t);
    }

    MediumParams p;
    p.g = cfg.number("g");
    p.n = cfg.number("n");
    p.gamma = cfg.number("gamma");
    p.delta_plus = cfg.number("delta_plus");
    p.delta_minus = cfg.number("delta_minus");
    p.omega_plus = cfg.number("omega_plus");
    p.omega_minus = cfg.number("omega_minus");
    p.k_p = cfg.number("k_p");
    p.m_atom = cfg.number("m_atom");
    p.delta_kerr = cfg.number("delta_kerr", 0.0);
    p.rho_dsp = cfg.number("rho_dsp", 0.0);
    return p;
}

} // namespace slp
