#include "slp/medium.hpp"

#include <cmath>

#include "slp/constants.hpp"
#include "slp/errors.hpp"

namespace slp {

namespace {

void require(bool ok, const char* message) {
    if (!ok)
        throw DomainError(message);
}

bool finite_all(const MediumParams& p) {
    for (double v : {p.g, p.n, p.gamma, p.delta_plus, p.delta_minus, p.omega_plus, p.omega_minus,
                     p.k_p, p.m_atom, p.delta_kerr, p.rho_dsp})
        if (!std::isfinite(v))
            return false;
    return true;
}

} // namespace

void validate(const MediumParams& p) {
    require(finite_all(p), "medium parameters must be finite");
    require(p.g > 0.0, "g must be positive");
    require(p.n > 0.0, "n must be positive");
    require(p.gamma > 0.0, "gamma must be positive");
    require(p.k_p > 0.0, "k_p must be positive");
    require(p.m_atom > 0.0, "m_atom must be positive");
    require(p.omega_plus >= 0.0 && p.omega_minus >= 0.0, "Rabi frequencies must be non-negative");
    require(p.omega_plus > 0.0 || p.omega_minus > 0.0,
            "at least one control field must be on (theta undefined)");
    require(p.delta_kerr != 0.0, "delta_kerr must be non-zero");
    require(p.rho_dsp >= 0.0, "rho_dsp must be non-negative");
    require(p.rho_dsp < p.n, "rho_dsp must be smaller than the atomic density n");
}

DerivedScales derive_scales(const MediumParams& p) {
    require(p.g > 0.0 && std::isfinite(p.g), "g must be positive");
    require(p.n > 0.0 && std::isfinite(p.n), "n must be positive");
    require(p.gamma > 0.0 && std::isfinite(p.gamma), "gamma must be positive");
    require(p.omega_plus >= 0.0 && p.omega_minus >= 0.0, "Rabi frequencies must be non-negative");
    require(p.omega_plus > 0.0 || p.omega_minus > 0.0,
            "at least one control field must be on (theta undefined)");

    DerivedScales s;
    const double g2n = p.g2n();
    s.omega_total_sq = p.omega_total_sq();
    s.theta = std::atan2(std::sqrt(g2n), std::sqrt(s.omega_total_sq));
    s.phi = std::atan2(p.omega_minus, p.omega_plus);
    // cos^2 theta = Omega^2 / (Omega^2 + g^2 n), exact in the strong-coupling limit
    s.v_gr = constants::c * s.omega_total_sq / (s.omega_total_sq + g2n);
    s.l_abs = p.gamma * constants::c / g2n;
    s.v_rec = p.k_p > 0.0 && p.m_atom > 0.0 ? constants::hbar * p.k_p / p.m_atom : 0.0;
    return s;
}

MediumParams params_from_scales(const ScaleTargets& t) {
    require(t.v_gr > 0.0 && t.v_gr < constants::c, "target v_gr must lie in (0, c)");
    require(t.l_abs > 0.0, "target l_abs must be positive");
    require(t.v_rec > 0.0, "target v_rec must be positive");
    require(t.tan_phi >= 0.0, "tan_phi must be non-negative");
    require(t.n > 0.0 && t.gamma > 0.0 && t.k_p > 0.0, "n, gamma and k_p must be positive");

    MediumParams p;
    p.n = t.n;
    p.gamma = t.gamma;
    p.k_p = t.k_p;
    p.delta_plus = t.delta;
    p.delta_minus = t.delta;
    p.delta_kerr = t.delta_kerr;
    p.rho_dsp = t.rho_dsp;

    const double g2n = t.gamma * constants::c / t.l_abs;
    p.g = std::sqrt(g2n / t.n);
    const double omega_sq = g2n * t.v_gr / (constants::c - t.v_gr);
    const double omega = std::sqrt(omega_sq);
    p.omega_plus = omega / std::sqrt(1.0 + t.tan_phi * t.tan_phi);
    p.omega_minus = p.omega_plus * t.tan_phi;
    p.m_atom = constants::hbar * t.k_p / t.v_rec;
    return p;
}

AdiabaticityReport validate_adiabaticity(const MediumParams& params, double pulse_time,
                                         double pulse_length, TimeInequality direction,
                                         double required_factor) {
    require(pulse_time > 0.0 && pulse_length > 0.0, "pulse time and length must be positive");
    require(required_factor > 1.0, "required factor must exceed 1");
    const DerivedScales s = derive_scales(params);

    AdiabaticityReport r;
    r.required_factor = required_factor;
    r.length_ratio = pulse_length / s.l_abs;
    r.time_ratio_light = pulse_time / (s.l_abs / constants::c);
    r.time_ratio_decay = pulse_time * params.gamma;
    r.tau = s.tau();
    r.length_ok = r.length_ratio >= required_factor;
    r.time_ok_as_written = r.time_ratio_light <= 1.0 / required_factor &&
                           r.time_ratio_decay <= 1.0 / required_factor;
    r.time_ok_slowly_varying = r.time_ratio_light >= required_factor &&
                               r.time_ratio_decay >= required_factor;
    r.direction = direction;
    r.time_ok = direction == TimeInequality::AsWritten ? r.time_ok_as_written
                                                       : r.time_ok_slowly_varying;
    r.direction_ambiguous = r.time_ok_as_written != r.time_ok_slowly_varying;
    r.pass = r.length_ok && r.time_ok;
    return r;
}

} // namespace slp
