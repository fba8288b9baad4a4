#include "doctest.h"

#include "slp/errors.hpp"
#include "evolve_cases.hpp"

using namespace slp;
using slp::test::close;

TEST_CASE("Gaussian observables") {
    const FieldState s = gaussian_state(test::line_grid(1024, 0.04), {0, 0, 1e-3}, 1e6);
    const Observables o = observables(s);
    CHECK(close(o.norm, 1e6, 1e-12));
    CHECK(close(o.rms_width[2], 1e-3, 1e-3));
    double k_norm = 0.0;
    for (double v : o.momentum_density)
        k_norm += v;
    CHECK(close(k_norm, o.norm, 1e-12));
}

TEST_CASE("plane wave sits in its momentum bin") {
    const Grid g = test::line_grid(64, 0.04);
    const double k = 2.0 * constants::pi * 5 / 0.04;
    const Observables o = observables(plane_wave_state(g, 2.0, {0, 0, k}));
    CHECK(close(o.momentum_density[5], o.norm, 1e-12));
    CHECK(o.k0_population < 1e-20 * o.norm);
}

TEST_CASE("3D Parseval and widths") {
    Grid g;
    g.shape = {16, 16, 32};
    g.box = {1e-3, 1e-3, 4e-3};
    const FieldState s = gaussian_state(g, {1e-4, 1.2e-4, 3e-4}, 1e5);
    const Observables o = observables(s);
    double k_norm = 0.0;
    for (double v : o.momentum_density)
        k_norm += v;
    CHECK(close(k_norm, o.norm, 1e-12));
    CHECK(close(o.rms_width[0], 1e-4, 1e-3));
    CHECK(close(o.rms_width[1], 1.2e-4, 1e-3));
}

TEST_CASE("free spreading follows the width law") {
    const test::WidthLaw w = test::free_spreading();
    CHECK(w.spreading >= 3.0);
    CHECK(close(w.measured, w.expected, 5e-3));
}

TEST_CASE("loss-free evolution conserves the norm") {
    CHECK(test::norm_drift_per_1000_steps() < 1e-10);
}

TEST_CASE("all toggles off is unitary") {
    const MassTensor mass = mass_tensor(test::vapor());
    FieldState s = gaussian_state(test::line_grid(256, 0.04), {0, 0, 2e-3}, 1e6, {0, 0, 300});
    const double n0 = s.particle_number();
    const Propagator prop(s.grid, test::quiet(1e-11, 1e-8), {}, mass);
    prop.evolve(s, 1e-8);
    CHECK(close(s.particle_number(), n0, 1e-12));
}

TEST_CASE("high-k components decay at 2 v_gr L_abs k^2") {
    for (int mode : {10, 40, 100}) {
        const test::Rate r = test::high_k_damping(mode);
        CHECK(close(r.measured, r.expected, 1e-2));
    }
}

TEST_CASE("uniform cubic loss follows its exact decay law") {
    const test::CubicDecay d = test::cubic_loss_decay();
    CHECK(d.worst_relative_error < 1e-2);
    CHECK(std::abs(d.slope - 2.0) < 0.05);
    CHECK(d.mean_field_over_estimate > 0.0);
}

TEST_CASE("losses never increase the norm") {
    const MediumParams p = test::vapor();
    FieldState s = gaussian_state(test::line_grid(128, 0.04), {0, 0, 2e-3}, 1e12);
    add_noise(s, 0.1, 3);
    EvolutionConfig cfg;
    cfg.dt = 1e-11;
    const Propagator prop(s.grid, cfg, master_equation_coefficients(p), mass_tensor(p));
    double previous = s.particle_number();
    for (int i = 0; i < 200; ++i) {
        prop.step(s);
        const double now = s.particle_number();
        CHECK(now <= previous * (1.0 + 1e-14));
        previous = now;
    }
}

TEST_CASE("uniform state winds its phase at u |psi|^2 / hbar") {
    const MediumParams p = test::vapor();
    const MeanFieldCoefficients c = master_equation_coefficients(p);
    Grid g;  // a single cell: only the nonlinear step acts
    const double rho = 1e15;
    FieldState s = uniform_state(g, rho);
    EvolutionConfig cfg = test::quiet(1e-3, 0.0);
    cfg.elastic = true;
    const Propagator prop(g, cfg, c, mass_tensor(p));
    prop.evolve(s, 0.05);
    const double u = kerr_coupling(p);
    const cplx expected = std::polar(std::sqrt(rho), -u / constants::hbar * rho * 0.05);
    for (const cplx& v : s.psi)
        CHECK(std::abs(v - expected) < 1e-9 * std::sqrt(rho));
}

TEST_CASE("Strang splitting is second order") {
    const double ratio = test::splitting_order_ratio();
    CHECK(ratio > 3.6);
    CHECK(ratio < 4.4);
}

TEST_CASE("repulsive condensate keeps its k = 0 population") {
    const test::Depletion d = test::condensate_depletion();
    CHECK(d.repulsive_min_ratio > 1.0 - 10.0 * d.noise_fraction);
    CHECK(d.attractive_min_ratio < 0.9);
}

TEST_CASE("time-step and field guards") {
    const MassTensor mass = mass_tensor(test::vapor());
    const Grid g = test::line_grid(512, 0.04);
    CHECK_THROWS_AS(Propagator(g, test::quiet(1e-9, 0.0), {}, mass), StabilityViolation);
    CHECK_THROWS_AS(Propagator(g, test::quiet(0.0, 0.0), {}, mass), DomainError);

    FieldState s = uniform_state(g, 1.0);
    s.psi[7] = cplx(NAN, 0.0);
    const Propagator prop(g, test::quiet(1e-12, 0.0), {}, mass);
    CHECK_THROWS_AS(prop.step(s), NonFiniteField);

    FieldState t = uniform_state(g, 1.0);
    CHECK_THROWS_AS(prop.evolve(t, 1.5e-12), DomainError);
}

TEST_CASE("release of a uniform slab is a rectangular pulse") {
    const MediumParams p = test::vapor();
    Grid g = test::line_grid(100, 0.01);
    g.shape = {2, 3, 100};
    g.box = {1e-3, 1e-3, 0.01};
    const FieldState s = uniform_state(g, 5e12);
    const EmittedPulse pulse = release(s, p, Direction::PlusZ);
    CHECK(close(pulse.duration, 1e-5, 1e-12));
    CHECK(close(pulse.total_quanta, s.particle_number(), 1e-12));
    for (double v : pulse.intensity)
        CHECK(close(v, pulse.v_gr * 5e12, 1e-12));
    for (double v : pulse.transverse_profile)
        CHECK(close(v, 5e12 * 0.01, 1e-12));
}

TEST_CASE("release order follows the exit face") {
    const MediumParams p = test::vapor();
    FieldState s = gaussian_state(test::line_grid(64, 0.01), {0, 0, 1e-3}, 1.0, {0, 0, 0});
    for (std::size_t i = 0; i < 64; ++i)
        s.psi[i] *= static_cast<double>(i + 1);  // ramp towards +z
    const EmittedPulse fwd = release(s, p, Direction::PlusZ);
    const EmittedPulse bwd = release(s, p, Direction::MinusZ);
    CHECK(close(fwd.total_quanta, s.particle_number(), 1e-12));
    CHECK(close(bwd.total_quanta, s.particle_number(), 1e-12));
    CHECK(fwd.intensity.front() == bwd.intensity.back());
}

TEST_CASE("run_evolution with release") {
    const MediumParams p = test::vapor();
    const FieldState s = gaussian_state(test::line_grid(128, 0.04), {0, 0, 2e-3}, 1e6);
    EvolutionConfig cfg = test::quiet(1e-11, 2e-9);
    cfg.release_time = 1e-9;
    const RunResult r = run_evolution(s, cfg, p, 10);
    REQUIRE(r.pulse);
    CHECK(close(r.final_state.time, 1e-9, 1e-12));
    CHECK(r.series.size() == 11);
    CHECK(close(r.pulse->total_quanta, 1e6, 1e-10));
}
