#pragma once

#include <string>
#include <vector>

namespace slp {

// Physical inputs of the double-Lambda medium, SI units throughout.
// g is the collective-free single-atom coupling; g*g*n has units 1/s^2.
struct MediumParams {
    double g = 0.0;           // rad m^{3/2} / s
    double n = 0.0;           // atom density, 1/m^3
    double gamma = 0.0;       // transverse decay of |e+-> - |g>, rad/s
    double delta_plus = 0.0;  // one-photon detunings, rad/s
    double delta_minus = 0.0;
    double omega_plus = 0.0;  // control Rabi frequencies (real, >= 0), rad/s
    double omega_minus = 0.0;
    double k_p = 0.0;         // probe carrier wavenumber, rad/m
    double m_atom = 0.0;      // kg
    double delta_kerr = 0.0;  // Kerr detuning, rad/s
    double rho_dsp = 0.0;     // dark-polariton density, 1/m^3

    double g2n() const { return g * g * n; }
    double omega_total_sq() const { return omega_plus * omega_plus + omega_minus * omega_minus; }
    // Mean one-photon detuning; the closed-form masses assume delta_plus == delta_minus.
    double delta() const { return 0.5 * (delta_plus + delta_minus); }
};

struct DerivedScales {
    double theta = 0.0;          // tan^2 theta = g^2 n / Omega^2
    double phi = 0.0;            // tan^2 phi = Omega_-^2 / Omega_+^2
    double omega_total_sq = 0.0; // rad^2/s^2
    double v_gr = 0.0;           // c cos^2 theta, m/s
    double l_abs = 0.0;          // gamma c / (g^2 n), m
    double v_rec = 0.0;          // hbar k_p / m, m/s

    double tau() const { return l_abs / v_gr; }
};

// Throws DomainError on any violated MediumParams invariant.
void validate(const MediumParams& params);

// Needs only g, n, gamma > 0 and a non-zero control field; other fields are not checked.
DerivedScales derive_scales(const MediumParams& params);

// Target scales from which a consistent MediumParams is constructed.
struct ScaleTargets {
    double v_gr = 0.0;
    double l_abs = 0.0;
    double v_rec = 0.0;
    double tan_phi = 1.0;
    double n = 0.0;
    double gamma = 0.0;
    double delta = 0.0;       // applied to both delta_plus and delta_minus
    double k_p = 0.0;
    double delta_kerr = 0.0;
    double rho_dsp = 0.0;
};

// Inverts derive_scales: chooses g, Omega_+-, m_atom so that the derived
// v_gr, l_abs, v_rec and phi reproduce the targets.
MediumParams params_from_scales(const ScaleTargets& targets);

enum class TimeInequality {
    AsWritten,       // T << {L_abs/c, 1/gamma}
    SlowlyVarying,   // T >> {L_abs/c, 1/gamma}
};

struct AdiabaticityReport {
    double length_ratio = 0.0;       // L / L_abs
    double time_ratio_light = 0.0;   // T / (L_abs / c)
    double time_ratio_decay = 0.0;   // T * gamma
    double tau = 0.0;                // L_abs / v_gr, characteristic polariton time
    double required_factor = 10.0;   // what "much greater" means
    bool length_ok = false;
    bool time_ok_as_written = false;
    bool time_ok_slowly_varying = false;
    TimeInequality direction = TimeInequality::SlowlyVarying;
    bool time_ok = false;            // verdict for the selected direction
    bool pass = false;               // length_ok && time_ok
    bool direction_ambiguous = true; // the two readings disagree
    double length_margin() const { return length_ratio; }
};

AdiabaticityReport validate_adiabaticity(const MediumParams& params, double pulse_time,
                                         double pulse_length,
                                         TimeInequality direction = TimeInequality::SlowlyVarying,
                                         double required_factor = 10.0);

} // namespace slp
