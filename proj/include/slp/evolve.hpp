#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "slp/kinetics.hpp"
#include "slp/medium.hpp"
#include "slp/thermo.hpp"

namespace slp {

using cplx = std::complex<double>;

// Uniform periodic grid. Axes are (x, y, z); x and y are transverse, z is longitudinal.
// A singleton axis still carries its box length so densities stay three-dimensional.
struct Grid {
    std::array<std::size_t, 3> shape{1, 1, 1};
    std::array<double, 3> box{1.0, 1.0, 1.0};  // m

    std::size_t size() const { return shape[0] * shape[1] * shape[2]; }
    double spacing(int axis) const { return box[axis] / static_cast<double>(shape[axis]); }
    double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
    // Cell-centred coordinate symmetric about zero: (i - N/2) * spacing.
    double coordinate(int axis, std::size_t i) const;
    // Angular wavenumber of FFT bin i (standard FFT ordering).
    double wavenumber(int axis, std::size_t i) const;
    std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return (ix * shape[1] + iy) * shape[2] + iz;
    }
    void validate() const;
};

// Dark-polariton envelope. |psi|^2 is the polariton density in 1/m^3.
struct FieldState {
    Grid grid;
    std::vector<cplx> psi;
    double time = 0.0;

    double particle_number() const;
};

FieldState gaussian_state(const Grid& grid, const std::array<double, 3>& rms_width,
                          double particle_number, const std::array<double, 3>& k0 = {0, 0, 0});
FieldState uniform_state(const Grid& grid, double density);
FieldState plane_wave_state(const Grid& grid, double density, const std::array<double, 3>& k0);
// Adds complex Gaussian noise of the given relative amplitude (w.r.t. the rms of |psi|).
void add_noise(FieldState& state, double relative_amplitude, std::uint64_t seed);

enum class InteractionSign {
    Derived,    // sign as derived: attractive for delta_kerr > 0
    Repulsive,  // |u| > 0 override for stability studies
};

enum class Direction { PlusZ, MinusZ };

struct EvolutionConfig {
    double dt = 0.0;       // s
    double t_final = 0.0;  // s
    bool elastic = true;
    bool dispersive_shift = true;
    bool nonlinear_loss = true;
    bool high_k_absorption = true;
    InteractionSign sign = InteractionSign::Derived;
    std::optional<double> release_time;  // control field Omega_- switched off
    Direction release_direction = Direction::PlusZ;
};

// Local mean-field rates obtained from the master-equation prefactors with a coherent-state
// ansatz: i dpsi/dt = (elastic |psi|^2 + cubic_shift |psi|^4) psi - i cubic_loss |psi|^4 psi.
// The uniform density then obeys d rho/dt = -2 cubic_loss rho^3.
struct NonlinearRates {
    double elastic = 0.0;      // u / hbar, m^3/s
    double cubic_shift = 0.0;  // m^6/s
    double cubic_loss = 0.0;   // m^6/s
};

NonlinearRates nonlinear_rates(const MeanFieldCoefficients& coeffs, const EvolutionConfig& cfg);

// Second-order split-step (kinetic half, nonlinear full, kinetic half) propagator.
// Owns the FFT plans for one grid; not copyable.
class Propagator {
public:
    Propagator(const Grid& grid, const EvolutionConfig& cfg, const MeanFieldCoefficients& coeffs,
               const MassTensor& mass);
    ~Propagator();
    Propagator(const Propagator&) = delete;
    Propagator& operator=(const Propagator&) = delete;

    void step(FieldState& state) const;
    // Steps until state.time reaches t_end (last step shortened is not allowed: t_end must be
    // a multiple of dt within 1e-9 relative). observer is called after every step.
    void evolve(FieldState& state, double t_end,
                const std::function<void(const FieldState&)>& observer = {}) const;

    // Largest kinetic phase rate on the grid, rad/s.
    double max_kinetic_frequency() const { return max_kinetic_; }
    const NonlinearRates& rates() const { return rates_; }

private:
    struct Plans;
    Grid grid_;
    EvolutionConfig cfg_;
    NonlinearRates rates_;
    std::vector<cplx> half_kinetic_;
    double max_kinetic_ = 0.0;
    std::unique_ptr<Plans> plans_;

    void kinetic(std::vector<cplx>& psi) const;
    void nonlinear(std::vector<cplx>& psi, double dt) const;
};

FieldState step(const FieldState& state, const EvolutionConfig& cfg,
                const MeanFieldCoefficients& coeffs, const MassTensor& mass);

struct EmittedPulse {
    std::vector<double> times;                // s, one per longitudinal slice
    std::vector<double> intensity;            // photon flux, 1/(m^2 s), layout [t][x][y]
    std::vector<double> transverse_profile;   // time-integrated flux, 1/m^2, layout [x][y]
    std::size_t nx = 0, ny = 0;
    double v_gr = 0.0;
    double duration = 0.0;                    // L_z / v_gr
    double total_quanta = 0.0;
};

// Ballistic release at v_gr along the chosen axis with a frozen transverse profile.
EmittedPulse release(const FieldState& state, const MediumParams& params, Direction direction);

struct Observables {
    double time = 0.0;
    double norm = 0.0;
    std::array<double, 3> rms_width{};
    double peak_density = 0.0;
    double k0_population = 0.0;               // momentum-space weight of the k = 0 bin
    std::vector<double> momentum_density;     // FFT layout; sums to norm
};

// The momentum density is only filled when requested.
Observables observables(const FieldState& state, bool with_momentum = true);

struct RunResult {
    FieldState final_state;
    std::vector<Observables> series;
    std::optional<EmittedPulse> pulse;
};

// Evolves to cfg.t_final, or to cfg.release_time followed by release().
// Observables are recorded every record_every steps (and at the end).
RunResult run_evolution(FieldState initial, const EvolutionConfig& cfg, const MediumParams& params,
                        std::size_t record_every = 100);

} // namespace slp
