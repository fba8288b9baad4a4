#include "slp/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "slp/constants.hpp"
#include "slp/errors.hpp"

namespace slp {

MassTensor MassTensor::isotropic(double mass) {
    if (!(mass > 0.0))
        throw DomainError("mass must be positive");
    MassTensor t;
    t.m_perp = mass;
    t.inv_m_par = 1.0 / mass;
    t.m_par = mass;
    t.m_par_dispersive = mass;
    t.m_eff_geometric = mass;
    return t;
}

MassTensor mass_tensor(const MediumParams& params) {
    const DerivedScales s = derive_scales(params);
    const double delta = params.delta();
    if (delta == 0.0)
        throw DomainError("mass tensor requires a non-zero one-photon detuning");
    if (!(params.k_p > 0.0))
        throw DomainError("k_p must be positive");

    MassTensor t;
    if (params.delta_plus != params.delta_minus)
        t.warnings.push_back("delta_plus != delta_minus; using their mean for m_par");
    if (std::abs(delta) < 10.0 * params.gamma)
        t.warnings.push_back("|Delta| is not much larger than gamma; m_par closed form is approximate");
    if (std::abs(params.omega_plus - params.omega_minus) >
        1e-12 * std::max(params.omega_plus, params.omega_minus))
        t.warnings.push_back("Omega_+ != Omega_-; the polariton drifts and m_par assumes phi = pi/4");

    t.m_perp = constants::hbar * params.k_p / s.v_gr;
    const double scale = 2.0 * params.k_p * s.l_abs / t.m_perp;
    t.inv_m_par = scale * std::complex<double>(delta / params.gamma, -1.0);
    t.m_par = 1.0 / t.inv_m_par;
    t.m_par_dispersive = 1.0 / t.inv_m_par.real();
    t.m_eff_geometric = std::cbrt(t.m_perp * t.m_perp * t.m_par_dispersive);
    if (!(t.m_par_dispersive > 0.0))
        t.warnings.push_back("negative longitudinal mass (Delta < 0)");
    return t;
}

double ideal_gas_tc(double mass, double density) {
    if (!(mass > 0.0) || !(density > 0.0))
        throw DomainError("ideal gas T_c needs positive mass and density");
    return 2.0 * constants::pi * constants::hbar * constants::hbar / (mass * constants::k_B) *
           std::pow(density / constants::zeta_3_2, 2.0 / 3.0);
}

TcReport critical_temperature(const MediumParams& params) {
    validate(params);
    if (params.rho_dsp <= 0.0)
        throw DomainError("critical temperature needs rho_dsp > 0");
    const DerivedScales s = derive_scales(params);
    const MassTensor mass = mass_tensor(params);
    if (!(mass.m_par_dispersive > 0.0))
        throw DomainError("critical temperature needs a positive longitudinal mass (Delta > 0)");

    TcReport r;
    r.warnings = mass.warnings;
    r.t_c_atom = ideal_gas_tc(params.m_atom, params.n);
    const double enhancement = 2.0 * params.k_p * s.l_abs * params.delta() / params.gamma;
    r.t_c_dsp = r.t_c_atom * std::pow(params.rho_dsp / params.n, 2.0 / 3.0) * (s.v_gr / s.v_rec) *
                std::cbrt(enhancement);
    r.t_c_geometric = ideal_gas_tc(mass.m_eff_geometric, params.rho_dsp);
    r.ratio = r.t_c_dsp / r.t_c_atom;
    r.t_eit = constants::hbar * std::abs(params.delta()) / constants::k_B;
    r.feasible = r.t_c_dsp <= r.t_eit;
    return r;
}

double condensate_fraction(double temperature, double t_c) {
    if (!(temperature >= 0.0) || !(t_c > 0.0))
        throw DomainError("condensate fraction needs T >= 0 and T_c > 0");
    return std::max(0.0, 1.0 - std::pow(temperature / t_c, 1.5));
}

ThermalWavelengths thermal_wavelengths(double temperature, const MassTensor& mass) {
    if (!(temperature > 0.0))
        throw DomainError("thermal wavelength needs T > 0");
    auto lambda = [&](double m) {
        return constants::h / std::sqrt(2.0 * constants::pi * m * constants::k_B * temperature);
    };
    return {lambda(mass.m_perp), lambda(mass.m_perp), lambda(mass.m_par_dispersive)};
}

} // namespace slp
