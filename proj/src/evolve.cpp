#include "slp/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <fftw3.h>

#include "slp/constants.hpp"
#include "slp/errors.hpp"

namespace slp {

double Grid::coordinate(int axis, std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(shape[axis] / 2)) * spacing(axis);
}

double Grid::wavenumber(int axis, std::size_t i) const {
    const std::size_t n = shape[axis];
    const double m = i <= (n - 1) / 2 ? static_cast<double>(i)
                                      : static_cast<double>(i) - static_cast<double>(n);
    return 2.0 * constants::pi * m / box[axis];
}

void Grid::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (shape[a] == 0)
            throw DomainError("grid axes need at least one point");
        if (!(box[a] > 0.0) || !std::isfinite(box[a]))
            throw DomainError("grid box lengths must be positive");
    }
}

double FieldState::particle_number() const {
    double sum = 0.0;
    for (const cplx& v : psi)
        sum += std::norm(v);
    return sum * grid.cell_volume();
}

namespace {

template <class F>
FieldState fill(const Grid& grid, F&& value) {
    grid.validate();
    FieldState s;
    s.grid = grid;
    s.psi.resize(grid.size());
    for (std::size_t ix = 0; ix < grid.shape[0]; ++ix)
        for (std::size_t iy = 0; iy < grid.shape[1]; ++iy)
            for (std::size_t iz = 0; iz < grid.shape[2]; ++iz)
                s.psi[grid.index(ix, iy, iz)] =
                    value(grid.coordinate(0, ix), grid.coordinate(1, iy), grid.coordinate(2, iz));
    return s;
}

void check_finite(const std::vector<cplx>& psi, double time) {
    for (const cplx& v : psi) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream msg;
            msg << "non-finite field sample at t = " << time;
            throw NonFiniteField(msg.str());
        }
    }
}

} // namespace

FieldState gaussian_state(const Grid& grid, const std::array<double, 3>& rms_width,
                          double particle_number, const std::array<double, 3>& k0) {
    for (int a = 0; a < 3; ++a)
        if (grid.shape[a] > 1 && !(rms_width[a] > 0.0))
            throw DomainError("Gaussian widths must be positive on resolved axes");
    FieldState s = fill(grid, [&](double x, double y, double z) {
        const std::array<double, 3> r{x, y, z};
        double exponent = 0.0;
        double phase = 0.0;
        for (int a = 0; a < 3; ++a) {
            if (grid.shape[a] > 1)
                exponent -= r[a] * r[a] / (4.0 * rms_width[a] * rms_width[a]);
            phase += k0[a] * r[a];
        }
        return std::polar(std::exp(exponent), phase);
    });
    const double scale = std::sqrt(particle_number / s.particle_number());
    for (cplx& v : s.psi)
        v *= scale;
    return s;
}

FieldState uniform_state(const Grid& grid, double density) {
    return plane_wave_state(grid, density, {0, 0, 0});
}

FieldState plane_wave_state(const Grid& grid, double density, const std::array<double, 3>& k0) {
    if (!(density >= 0.0))
        throw DomainError("density must be non-negative");
    const double amplitude = std::sqrt(density);
    return fill(grid, [&](double x, double y, double z) {
        return std::polar(amplitude, k0[0] * x + k0[1] * y + k0[2] * z);
    });
}

void add_noise(FieldState& state, double relative_amplitude, std::uint64_t seed) {
    const double rms = std::sqrt(state.particle_number() / (state.grid.cell_volume() *
                                                            static_cast<double>(state.psi.size())));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, relative_amplitude * rms / std::sqrt(2.0));
    for (cplx& v : state.psi)
        v += cplx(normal(rng), normal(rng));
}

NonlinearRates nonlinear_rates(const MeanFieldCoefficients& coeffs, const EvolutionConfig& cfg) {
    NonlinearRates r;
    if (cfg.elastic) {
        // u / hbar with u = -hbar g^2 cos^2 theta / delta_kerr as written.
        r.elastic = cfg.sign == InteractionSign::Derived ? -coeffs.elastic : std::abs(coeffs.elastic);
    }
    // Coherent-state expectation of the cubic-density terms: d/dpsi* |psi|^6 = 3 |psi|^4 psi.
    if (cfg.dispersive_shift)
        r.cubic_shift = -3.0 * coeffs.dispersive;
    if (cfg.nonlinear_loss)
        r.cubic_loss = 3.0 * coeffs.anticommutator;
    return r;
}

struct Propagator::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    ~Plans() {
        if (forward)
            fftw_destroy_plan(forward);
        if (backward)
            fftw_destroy_plan(backward);
    }
};

Propagator::Propagator(const Grid& grid, const EvolutionConfig& cfg,
                       const MeanFieldCoefficients& coeffs, const MassTensor& mass)
    : grid_(grid), cfg_(cfg), rates_(nonlinear_rates(coeffs, cfg)), plans_(std::make_unique<Plans>()) {
    grid_.validate();
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
        throw DomainError("time step must be positive");
    if (!(mass.m_perp > 0.0) || !(mass.inv_m_par.real() > 0.0))
        throw DomainError("propagation needs positive transverse and dispersive longitudinal masses");

    const double hbar = constants::hbar;
    const double damping = cfg.high_k_absorption ? 0.5 * hbar * std::abs(mass.inv_m_par.imag()) : 0.0;
    half_kinetic_.resize(grid_.size());
    for (std::size_t ix = 0; ix < grid_.shape[0]; ++ix) {
        const double kx = grid_.wavenumber(0, ix);
        for (std::size_t iy = 0; iy < grid_.shape[1]; ++iy) {
            const double ky = grid_.wavenumber(1, iy);
            for (std::size_t iz = 0; iz < grid_.shape[2]; ++iz) {
                const double kz = grid_.wavenumber(2, iz);
                const double omega = 0.5 * hbar * ((kx * kx + ky * ky) / mass.m_perp +
                                                   kz * kz * mass.inv_m_par.real());
                max_kinetic_ = std::max(max_kinetic_, omega);
                const double decay = damping * kz * kz;
                half_kinetic_[grid_.index(ix, iy, iz)] =
                    std::polar(std::exp(-decay * 0.5 * cfg.dt), -omega * 0.5 * cfg.dt);
            }
        }
    }
    if (cfg.dt * max_kinetic_ >= 0.5) {
        std::ostringstream msg;
        msg << "dt * max kinetic frequency = " << cfg.dt * max_kinetic_ << " >= 0.5 rad";
        throw StabilityViolation(msg.str());
    }

    std::vector<cplx> scratch(grid_.size());
    auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
    const int n[3] = {static_cast<int>(grid_.shape[0]), static_cast<int>(grid_.shape[1]),
                      static_cast<int>(grid_.shape[2])};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->forward = fftw_plan_dft(3, n, data, data, FFTW_FORWARD, flags);
    plans_->backward = fftw_plan_dft(3, n, data, data, FFTW_BACKWARD, flags);
    if (!plans_->forward || !plans_->backward)
        throw NumericalError("FftPlanFailure", "could not create FFT plans");
}

Propagator::~Propagator() = default;

void Propagator::kinetic(std::vector<cplx>& psi) const {
    auto* data = reinterpret_cast<fftw_complex*>(psi.data());
    fftw_execute_dft(plans_->forward, data, data);
    const double inv_n = 1.0 / static_cast<double>(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        psi[i] *= half_kinetic_[i] * inv_n;
    fftw_execute_dft(plans_->backward, data, data);
}

void Propagator::nonlinear(std::vector<cplx>& psi, double dt) const {
    const double a = rates_.elastic, b = rates_.cubic_shift, kappa = rates_.cubic_loss;
    if (a == 0.0 && b == 0.0 && kappa == 0.0)
        return;
    for (cplx& v : psi) {
        const double rho0 = std::norm(v);
        if (rho0 == 0.0)
            continue;
        // Exact solution of the local equation over dt:
        // rho(t) = rho0 / sqrt(1 + 4 kappa rho0^2 t).
        const double x = 4.0 * kappa * rho0 * rho0 * dt;
        const double s = 1.0 + x;
        const double root = std::sqrt(s);
        const double int_rho = 2.0 * rho0 * dt / (root + 1.0);
        const double int_rho2 = rho0 * rho0 * dt * (x > 0.0 ? std::log1p(x) / x : 1.0);
        const double phase = -(a * int_rho + b * int_rho2);
        v *= std::polar(1.0 / std::sqrt(root), phase);
    }
}

void Propagator::step(FieldState& state) const {
    if (state.grid.shape != grid_.shape || state.grid.box != grid_.box)
        throw DomainError("state grid does not match the propagator grid");
    kinetic(state.psi);
    nonlinear(state.psi, cfg_.dt);
    kinetic(state.psi);
    state.time += cfg_.dt;
    check_finite(state.psi, state.time);
}

void Propagator::evolve(FieldState& state, double t_end,
                        const std::function<void(const FieldState&)>& observer) const {
    const double steps_real = (t_end - state.time) / cfg_.dt;
    const double steps = std::round(steps_real);
    if (steps < 0.0 || std::abs(steps_real - steps) > 1e-9 * std::max(1.0, steps))
        throw DomainError("evolution span must be a non-negative multiple of dt");
    const double start = state.time;
    for (std::size_t i = 0; i < static_cast<std::size_t>(steps); ++i) {
        step(state);
        state.time = start + static_cast<double>(i + 1) * cfg_.dt;
        if (observer)
            observer(state);
    }
}

FieldState step(const FieldState& state, const EvolutionConfig& cfg,
                const MeanFieldCoefficients& coeffs, const MassTensor& mass) {
    const Propagator propagator(state.grid, cfg, coeffs, mass);
    FieldState next = state;
    propagator.step(next);
    return next;
}

EmittedPulse release(const FieldState& state, const MediumParams& params, Direction direction) {
    const Grid& g = state.grid;
    EmittedPulse pulse;
    pulse.v_gr = derive_scales(params).v_gr;
    pulse.nx = g.shape[0];
    pulse.ny = g.shape[1];
    const std::size_t nz = g.shape[2];
    const double dz = g.spacing(2);
    const double dt = dz / pulse.v_gr;
    pulse.duration = g.box[2] / pulse.v_gr;
    pulse.times.resize(nz);
    pulse.intensity.assign(nz * pulse.nx * pulse.ny, 0.0);
    pulse.transverse_profile.assign(pulse.nx * pulse.ny, 0.0);

    // Slice j leaves the face at t0 + j dz / v_gr; the slice nearest the exit face goes first.
    for (std::size_t j = 0; j < nz; ++j) {
        pulse.times[j] = state.time + static_cast<double>(j) * dt;
        const std::size_t iz = direction == Direction::PlusZ ? nz - 1 - j : j;
        for (std::size_t ix = 0; ix < pulse.nx; ++ix) {
            for (std::size_t iy = 0; iy < pulse.ny; ++iy) {
                const double density = std::norm(state.psi[g.index(ix, iy, iz)]);
                const double flux = pulse.v_gr * density;
                pulse.intensity[(j * pulse.nx + ix) * pulse.ny + iy] = flux;
                pulse.transverse_profile[ix * pulse.ny + iy] += flux * dt;
            }
        }
    }
    double total = 0.0;
    for (double v : pulse.transverse_profile)
        total += v;
    pulse.total_quanta = total * g.spacing(0) * g.spacing(1);
    return pulse;
}

Observables observables(const FieldState& state, bool with_momentum) {
    const Grid& g = state.grid;
    Observables o;
    o.time = state.time;
    o.norm = state.particle_number();

    std::array<double, 3> mean{}, second{};
    for (std::size_t ix = 0; ix < g.shape[0]; ++ix)
        for (std::size_t iy = 0; iy < g.shape[1]; ++iy)
            for (std::size_t iz = 0; iz < g.shape[2]; ++iz) {
                const double w = std::norm(state.psi[g.index(ix, iy, iz)]);
                o.peak_density = std::max(o.peak_density, w);
                const std::array<double, 3> r{g.coordinate(0, ix), g.coordinate(1, iy),
                                              g.coordinate(2, iz)};
                for (int a = 0; a < 3; ++a) {
                    mean[a] += w * r[a];
                    second[a] += w * r[a] * r[a];
                }
            }
    const double total = o.norm / g.cell_volume();
    for (int a = 0; a < 3; ++a) {
        if (total > 0.0) {
            const double m = mean[a] / total;
            o.rms_width[a] = std::sqrt(std::max(0.0, second[a] / total - m * m));
        }
    }

    std::vector<cplx> spectrum = state.psi;
    auto* data = reinterpret_cast<fftw_complex*>(spectrum.data());
    const int n[3] = {static_cast<int>(g.shape[0]), static_cast<int>(g.shape[1]),
                      static_cast<int>(g.shape[2])};
    fftw_plan plan = fftw_plan_dft(3, n, data, data, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    // Parseval: sum |F|^2 = N sum |psi|^2.
    const double scale = g.cell_volume() / static_cast<double>(spectrum.size());
    o.k0_population = std::norm(spectrum[0]) * scale;
    if (with_momentum) {
        o.momentum_density.resize(spectrum.size());
        for (std::size_t i = 0; i < spectrum.size(); ++i)
            o.momentum_density[i] = std::norm(spectrum[i]) * scale;
    }
    return o;
}

RunResult run_evolution(FieldState initial, const EvolutionConfig& cfg, const MediumParams& params,
                        std::size_t record_every) {
    const MassTensor mass = mass_tensor(params);
    const MeanFieldCoefficients coeffs = master_equation_coefficients(params);
    const Propagator propagator(initial.grid, cfg, coeffs, mass);

    const double t_end = cfg.release_time ? std::min(*cfg.release_time, cfg.t_final) : cfg.t_final;
    RunResult result;
    result.series.push_back(observables(initial, false));
    std::size_t counter = 0;
    propagator.evolve(initial, t_end, [&](const FieldState& s) {
        if (record_every > 0 && ++counter % record_every == 0)
            result.series.push_back(observables(s, false));
    });
    if (result.series.back().time != initial.time)
        result.series.push_back(observables(initial, false));
    if (cfg.release_time)
        result.pulse = release(initial, params, cfg.release_direction);
    result.final_state = std::move(initial);
    return result;
}

} // namespace slp
