#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slp/medium.hpp"

namespace slp {

// Flat "key = value" configuration. '#' starts a comment; blank lines are ignored.
// Keys outside the documented vocabulary, duplicate keys and malformed lines are
// rejected with ConfigError. Every accessor marks its key as used.
class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "<string>");
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    std::optional<double> optional_number(const std::string& key) const;
    std::size_t count(const std::string& key, std::size_t fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;

    // Replaces (or adds) a numeric value; used by parameter sweeps.
    void set(const std::string& key, const std::string& value);

    const std::map<std::string, std::string>& values() const { return values_; }
    std::vector<std::string> unused_keys() const;

    static const std::set<std::string>& vocabulary();

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
    mutable std::set<std::string> used_;

    const std::string& raw(const std::string& key) const;
};

// Medium parameters either given directly (g, omega_plus, omega_minus, m_atom, ...) or through
// target scales (v_gr, l_abs, v_rec, tan_phi, delta). Mixing the two forms is a ConfigError.
// delta_kerr and rho_dsp default to 0 and are checked by the operations that need them.
MediumParams load_medium(const Config& config);

} // namespace slp
