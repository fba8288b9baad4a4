#pragma once

#include <cmath>
#include <filesystem>
#include <random>

#include "slp/medium.hpp"

namespace slp::test {

inline constexpr double two_pi = 6.283185307179586;

inline bool close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// Hot-vapour set: v_gr = 1 km/s, L_abs = 1 cm, v_rec = 5 cm/s, Delta = 10 gamma,
// Delta_Kerr = 100 gamma, rho_dsp / n = 0.1, 500 nm pump.
inline MediumParams vapor(double l_abs = 0.01) {
    ScaleTargets t;
    t.v_gr = 1000.0;
    t.l_abs = l_abs;
    t.v_rec = 0.05;
    t.n = 1e16;
    t.gamma = two_pi * 2e6;
    t.delta = 10.0 * t.gamma;
    t.k_p = two_pi / 500e-9;
    t.delta_kerr = 100.0 * t.gamma;
    t.rho_dsp = 0.1 * t.n;
    return params_from_scales(t);
}

// theta = phi = pi/4, Delta = 2 Omega. gamma only fixes the length unit.
inline MediumParams symmetric(double omega = 1e7) {
    MediumParams p;
    p.n = 1e16;
    p.g = std::sqrt(2.0 * omega * omega / p.n);
    p.gamma = 0.2 * omega;
    p.delta_plus = p.delta_minus = 2.0 * omega;
    p.omega_plus = p.omega_minus = omega;
    p.k_p = two_pi / 500e-9;
    p.m_atom = 2.65e-26;
    p.delta_kerr = 100.0 * p.gamma;
    p.rho_dsp = 0.1 * p.n;
    return p;
}

// Random valid medium spanning several decades in each scale.
inline MediumParams random_medium(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto decade = [&](double lo, double hi) { return std::pow(10.0, lo + (hi - lo) * u(rng)); };
    ScaleTargets t;
    t.v_gr = decade(0, 5);
    t.l_abs = decade(-6, -1);
    t.v_rec = decade(-3, -1);
    t.tan_phi = 1.0;
    t.n = decade(14, 20);
    t.gamma = decade(5, 8);
    t.delta = t.gamma * decade(0.5, 3);
    t.k_p = two_pi / decade(-6.5, -5.5);
    t.delta_kerr = t.gamma * decade(0, 4) * (u(rng) < 0.5 ? 1.0 : -1.0);
    t.rho_dsp = t.n * decade(-4, -0.1);
    return params_from_scales(t);
}

inline std::filesystem::path scratch_dir(const std::string& name) {
#ifdef SLP_TEST_TMP
    const std::filesystem::path p = std::filesystem::path(SLP_TEST_TMP) / name;
#else
    const std::filesystem::path p = std::filesystem::temp_directory_path() / ("slp_" + name);
#endif
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace slp::test
