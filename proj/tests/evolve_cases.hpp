#pragma once

// Property experiments on the split-step propagator shared by the unit tests and the
// acceptance binary. Each returns the measured quantity next to its analytic value.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "slp/evolve.hpp"
#include "slp/kinetics.hpp"
#include "slp/constants.hpp"
#include "slp/thermo.hpp"
#include "support.hpp"

namespace slp::test {

inline Grid line_grid(std::size_t nz, double box_z) {
    Grid g;
    g.shape = {1, 1, nz};
    g.box = {1.0, 1.0, box_z};
    return g;
}

inline EvolutionConfig quiet(double dt, double t_final) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.elastic = cfg.dispersive_shift = cfg.nonlinear_loss = cfg.high_k_absorption = false;
    return cfg;
}

struct WidthLaw {
    double measured = 0.0;
    double expected = 0.0;
    double spreading = 0.0;
};

// Free 1D Gaussian spreading to just over three times its initial width.
inline WidthLaw free_spreading() {
    const MassTensor mass = mass_tensor(vapor());
    const double sigma0 = 1e-3;
    const double d = 0.5 * constants::hbar * mass.inv_m_par.real();
    const double t = 2.83 * sigma0 * sigma0 / d;
    FieldState s = gaussian_state(line_grid(512, 0.04), {0, 0, sigma0}, 1e6);
    const Propagator prop(s.grid, quiet(t / 10000, t), {}, mass);
    prop.evolve(s, t);
    WidthLaw w;
    w.measured = observables(s, false).rms_width[2];
    w.expected = sigma0 * std::sqrt(1.0 + std::pow(d * t / (sigma0 * sigma0), 2));
    w.spreading = w.expected / sigma0;
    return w;
}

// Relative norm change over 1000 steps with the conservative terms on and no losses.
inline double norm_drift_per_1000_steps() {
    const MediumParams p = vapor();
    const MassTensor mass = mass_tensor(p);
    FieldState s = gaussian_state(line_grid(512, 0.04), {0, 0, 1e-3}, 1e6);
    add_noise(s, 1e-3, 5);
    EvolutionConfig cfg = quiet(2e-12, 2e-9);
    cfg.elastic = cfg.dispersive_shift = true;
    MeanFieldCoefficients c = master_equation_coefficients(p);
    c.elastic = 1.0;  // strong enough to wind the phase visibly
    const Propagator prop(s.grid, cfg, c, mass);
    const double n0 = s.particle_number();
    prop.evolve(s, 2e-9);
    return std::abs(s.particle_number() / n0 - 1.0);
}

struct Rate {
    double measured = 0.0;
    double expected = 0.0;
};

// Intensity decay of a single longitudinal Fourier mode under the absorptive mass, run for
// about five e-folds so round-off leaking into slower modes never dominates the norm.
inline Rate high_k_damping(int mode = 40) {
    const MediumParams p = vapor();
    const DerivedScales s = derive_scales(p);
    const MassTensor mass = mass_tensor(p);
    const Grid g = line_grid(256, 0.04);
    const double k = 2.0 * constants::pi * mode / g.box[2];
    FieldState st = plane_wave_state(g, 1e8, {0, 0, k});
    const double expected = 2.0 * s.v_gr * s.l_abs * k * k;
    const double dt = 1e-11;
    EvolutionConfig cfg = quiet(dt, 0.0);
    cfg.high_k_absorption = true;
    const Propagator prop(g, cfg, {}, mass);
    const double n0 = st.particle_number();
    const double t = dt * std::max(1.0, std::round(5.0 / (expected * dt)));
    prop.evolve(st, t);
    return {-std::log(st.particle_number() / n0) / t, expected};
}

struct CubicDecay {
    double worst_relative_error = 0.0;  // against rho0 / sqrt(1 + 4 kappa rho0^2 t)
    double slope = 0.0;                 // d ln(rate) / d ln(rho)
    double mean_field_over_estimate = 0.0;  // per-particle rate / (v/L)(gamma/dK)^2 (rho/n)^2
};

inline CubicDecay cubic_loss_decay() {
    const MediumParams p = vapor();
    const MassTensor mass = mass_tensor(p);
    const MeanFieldCoefficients c = master_equation_coefficients(p);
    Grid g;  // one cell: the uniform state has no kinetic energy
    CubicDecay out;
    std::vector<double> log_rho, log_rate;
    for (double rho0 : {1e14, 3e14, 1e15, 3e15}) {
        EvolutionConfig cfg = quiet(1.0, 0.0);
        cfg.nonlinear_loss = true;
        const double kappa = nonlinear_rates(c, cfg).cubic_loss;
        const double t_char = 1.0 / (4.0 * kappa * rho0 * rho0);
        cfg.dt = t_char / 100.0;
        const Propagator prop(g, cfg, c, mass);
        FieldState st = uniform_state(g, rho0);
        for (int block = 1; block <= 10; ++block) {
            prop.evolve(st, block * 100 * cfg.dt);
            const double exact = rho0 / std::sqrt(1.0 + 4.0 * kappa * rho0 * rho0 * st.time);
            out.worst_relative_error =
                std::max(out.worst_relative_error, std::abs(std::norm(st.psi[0]) / exact - 1.0));
        }
        // Per-particle rate from the first 1e-4 t_char.
        EvolutionConfig short_cfg = cfg;
        short_cfg.dt = 1e-4 * t_char;
        FieldState probe = uniform_state(g, rho0);
        Propagator(g, short_cfg, c, mass).step(probe);
        const double rate = -std::log(std::norm(probe.psi[0]) / rho0) / short_cfg.dt;
        log_rho.push_back(std::log(rho0));
        log_rate.push_back(std::log(rate));
        if (rho0 == p.rho_dsp) {
            const DerivedScales s = derive_scales(p);
            const double x = p.gamma / std::abs(p.delta_kerr) * rho0 / p.n;
            out.mean_field_over_estimate = rate / (s.v_gr / s.l_abs * x * x);
        }
    }
    const double n = static_cast<double>(log_rho.size());
    double mx = 0, my = 0, sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < log_rho.size(); ++i) {
        mx += log_rho[i] / n;
        my += log_rate[i] / n;
    }
    for (std::size_t i = 0; i < log_rho.size(); ++i) {
        sxy += (log_rho[i] - mx) * (log_rate[i] - my);
        sxx += (log_rho[i] - mx) * (log_rho[i] - mx);
    }
    out.slope = sxy / sxx;
    return out;
}

// Error of a free Gaussian with a strong elastic term, against a 32x finer reference.
// Returns err(dt) / err(dt / 2).
inline double splitting_order_ratio() {
    const MassTensor mass = mass_tensor(vapor());
    const double sigma0 = 1e-3;
    const double d = 0.5 * constants::hbar * mass.inv_m_par.real();
    const double t = 2.83 * sigma0 * sigma0 / d;
    const FieldState initial = gaussian_state(line_grid(128, 0.04), {0, 0, sigma0}, 1e6);
    MeanFieldCoefficients c;
    c.elastic = 2.0 / (observables(initial, false).peak_density * t);

    auto run = [&](int steps) {
        EvolutionConfig cfg = quiet(t / steps, t);
        cfg.elastic = true;
        cfg.sign = InteractionSign::Repulsive;
        FieldState s = initial;
        Propagator(s.grid, cfg, c, mass).evolve(s, t);
        return s;
    };
    const FieldState reference = run(32000);
    auto error = [&](const FieldState& s) {
        double e = 0.0, n = 0.0;
        for (std::size_t i = 0; i < s.psi.size(); ++i) {
            e += std::norm(s.psi[i] - reference.psi[i]);
            n += std::norm(reference.psi[i]);
        }
        return std::sqrt(e / n);
    };
    return error(run(1000)) / error(run(2000));
}

struct Depletion {
    double repulsive_min_ratio = 0.0;   // min over time of k0 population / initial
    double attractive_min_ratio = 0.0;  // same for the attractive sign, which recurs
    double noise_fraction = 0.0;       // initial non-condensed fraction
};

// Uniform condensate plus weak noise, elastic term only.
inline Depletion condensate_depletion() {
    const MassTensor mass = mass_tensor(vapor());
    const Grid g = line_grid(64, 0.04);
    const double rho = 1e8;
    MeanFieldCoefficients c;
    c.elastic = 1e7 / rho;  // |u| rho / hbar = 1e7 rad/s: modes 1 and 2 lie in the unstable band
    FieldState start = uniform_state(g, rho);
    add_noise(start, 1e-3, 17);
    const Observables o0 = observables(start, false);

    Depletion out;
    out.noise_fraction = 1.0 - o0.k0_population / o0.norm;
    const double t = 3e-6, dt = 1e-10;
    for (InteractionSign sign : {InteractionSign::Repulsive, InteractionSign::Derived}) {
        EvolutionConfig cfg = quiet(dt, t);
        cfg.elastic = true;
        cfg.sign = sign;
        // The derived sign with a positive coefficient is attractive.
        FieldState s = start;
        double lowest = 1.0;
        Propagator(g, cfg, c, mass).evolve(s, t, [&](const FieldState& now) {
            if (static_cast<long>(std::llround(now.time / dt)) % 100 == 0)
                lowest = std::min(lowest, observables(now, false).k0_population / o0.k0_population);
        });
        lowest = std::min(lowest, observables(s, false).k0_population / o0.k0_population);
        (sign == InteractionSign::Repulsive ? out.repulsive_min_ratio : out.attractive_min_ratio) =
            lowest;
    }
    return out;
}

} // namespace slp::test
