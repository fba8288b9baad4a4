#pragma once

#include <complex>
#include <string>
#include <vector>

#include "slp/medium.hpp"

namespace slp {

// Effective mass tensor of the stationary dark polariton.
//
// The longitudinal inverse mass carries a small imaginary part describing the
// absorption of high spatial-frequency components. Its sign is chosen so that
// those components decay: 1/m_par = (2 k_p L_abs / m_perp) (Delta/gamma - i).
struct MassTensor {
    double m_perp = 0.0;                  // hbar k_p / v_gr, kg
    std::complex<double> inv_m_par;       // 1/kg
    std::complex<double> m_par;           // 1 / inv_m_par, kg
    double m_par_dispersive = 0.0;        // 1 / Re(1/m_par): the mass of the real dispersion, kg
    double m_eff_geometric = 0.0;         // (m_perp^2 m_par_dispersive)^{1/3}, kg
    std::vector<std::string> warnings;

    static MassTensor isotropic(double mass);
};

MassTensor mass_tensor(const MediumParams& params);

struct TcReport {
    double t_c_atom = 0.0;     // K
    double t_c_dsp = 0.0;      // K, closed form
    double t_c_geometric = 0.0;// K, ideal gas evaluated with m_eff_geometric and rho_dsp
    double ratio = 0.0;        // t_c_dsp / t_c_atom
    double t_eit = 0.0;        // hbar |Delta| / k_B, order of magnitude only
    bool feasible = true;      // t_c_dsp <= t_eit
    std::vector<std::string> warnings;
};

// Ideal homogeneous Bose gas: k_B T_c = (2 pi hbar^2 / m) (density / zeta(3/2))^{2/3}.
double ideal_gas_tc(double mass, double density);

TcReport critical_temperature(const MediumParams& params);

// max(0, 1 - (T/T_c)^{3/2}).
double condensate_fraction(double temperature, double t_c);

struct ThermalWavelengths {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// lambda_i = h / sqrt(2 pi m_i k_B T); the z axis uses the dispersive longitudinal mass.
ThermalWavelengths thermal_wavelengths(double temperature, const MassTensor& mass);

} // namespace slp
