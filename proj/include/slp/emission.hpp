#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "slp/thermo.hpp"

namespace slp {

// Homogeneous ideal Bose gas of dark polaritons with an anisotropic mass.
struct EquilibriumSpec {
    double temperature = 0.0;     // K
    double total_density = 0.0;   // 1/m^3
    MassTensor mass;
    double envelope_width = 0.0;  // transverse extent of the sample (Gaussian), m
};

// Builds a spec whose envelope is envelope_factor thermal wavelengths lambda_{T,x}.
EquilibriumSpec make_equilibrium(double temperature, double density, const MassTensor& mass,
                                 double envelope_factor = 178.0);

struct ChemicalPotential {
    double mu = 0.0;                   // J, <= 0
    double fugacity = 0.0;             // exp(mu / k_B T)
    double phase_space_density = 0.0;  // n lambda_x lambda_y lambda_z
    double thermal_density = 0.0;      // 1/m^3
    double condensate_density = 0.0;   // 1/m^3
    double condensate_fraction = 0.0;
    int iterations = 0;
};

// Solves n = g_{3/2}(z) / (lambda_x lambda_y lambda_z) by bisection in ln z to 1e-12 relative
// fugacity. Above the critical phase-space density mu = 0 and the excess condenses.
// If trace is given, the bracket (ln z_lo, ln z_hi) is appended after every step.
// Throws NoConvergence after 200 steps.
ChemicalPotential chemical_potential(const EquilibriumSpec& spec,
                                     std::vector<std::pair<double, double>>* trace = nullptr);

// Bose-Einstein occupation 1 / (exp((eps - mu)/k_B T) - 1) on a rectangular momentum grid.
struct MomentumGrid {
    std::array<std::vector<double>, 3> k;  // rad/m per axis
};

// Symmetric grid of `points` (odd) per axis spanning +-extent * 2 pi / lambda_{T,i}.
MomentumGrid thermal_momentum_grid(const EquilibriumSpec& spec, double extent = 4.0,
                                   std::size_t points = 81);

struct MomentumDistribution {
    MomentumGrid grid;
    std::vector<double> occupation;     // layout [x][y][z]
    double condensate_density = 0.0;    // weight carried by the k = 0 mode, 1/m^3
    double thermal_density_quadrature = 0.0;  // sum n(k) d^3k / (2 pi)^3
};

// eps(k) = hbar^2 k_perp^2 / 2 m_perp + hbar^2 k_z^2 / 2 m_par (dispersive mass).
// With mu = 0 the divergent k = 0 sample is excluded; the condensate carries that mode.
MomentumDistribution momentum_distribution(const EquilibriumSpec& spec,
                                           const ChemicalPotential& mu, const MomentumGrid& grid);

// Far-field transverse emission profile along x, integrated over y.
// The detector coordinate is linear in k_x; profiles are tabulated in the dimensionless
// coordinate u = k_x / k_T with k_T = 2 pi / lambda_{T,x} (reported as far_field_scale).
struct EmissionProfile {
    std::vector<double> u;
    std::vector<double> total;
    std::vector<double> thermal;
    std::vector<double> condensate;
    double condensate_fraction = 0.0;
    double condensate_width = 0.0;  // rms width of the condensate peak in u
    double far_field_scale = 0.0;   // k_T, rad/m per unit u
    double t_over_tc = 0.0;
    double mu = 0.0;
    double fugacity = 0.0;
};

struct ProfileOptions {
    double half_extent = 3.0;    // in u
    std::size_t points = 40000;  // even: the grid straddles u = 0 symmetrically
};

// Thermal part: exact marginal of the Bose distribution, proportional to
// -ln(1 - z exp(-pi u^2)). Condensate part: Gaussian of rms width 1/(k_T w) for an
// envelope of width w. Each part is normalized to its weight; the sum integrates to 1.
EmissionProfile transverse_profile(const EquilibriumSpec& spec, const ChemicalPotential& mu,
                                   const ProfileOptions& options = {});

struct Peak {
    double position = 0.0;
    double height = 0.0;
    double fwhm = 0.0;
};

// Local maxima of a sampled curve with their full widths at half maximum.
std::vector<Peak> local_maxima(const std::vector<double>& x, const std::vector<double>& y);

// rms width of a sampled non-negative curve.
double rms_width(const std::vector<double>& x, const std::vector<double>& y);

} // namespace slp
