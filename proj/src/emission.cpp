#include "slp/emission.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slp/constants.hpp"
#include "slp/errors.hpp"
#include "slp/special.hpp"

namespace slp {

namespace {

void check_spec(const EquilibriumSpec& spec) {
    if (!(spec.temperature > 0.0))
        throw DomainError("temperature must be positive");
    if (!(spec.total_density > 0.0))
        throw DomainError("density must be positive");
    if (!(spec.envelope_width > 0.0))
        throw DomainError("envelope width must be positive");
    if (!(spec.mass.m_perp > 0.0) || !(spec.mass.m_par_dispersive > 0.0))
        throw DomainError("equilibrium needs positive masses");
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        sum += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return sum;
}

} // namespace

EquilibriumSpec make_equilibrium(double temperature, double density, const MassTensor& mass,
                                 double envelope_factor) {
    EquilibriumSpec spec;
    spec.temperature = temperature;
    spec.total_density = density;
    spec.mass = mass;
    spec.envelope_width = envelope_factor * thermal_wavelengths(temperature, mass).x;
    return spec;
}

ChemicalPotential chemical_potential(const EquilibriumSpec& spec,
                                     std::vector<std::pair<double, double>>* trace) {
    check_spec(spec);
    const ThermalWavelengths lambda = thermal_wavelengths(spec.temperature, spec.mass);
    const double volume = lambda.x * lambda.y * lambda.z;
    const double kT = constants::k_B * spec.temperature;

    ChemicalPotential r;
    r.phase_space_density = spec.total_density * volume;
    const double d = r.phase_space_density;

    if (d >= constants::zeta_3_2 * (1.0 - 1e-12)) {
        r.mu = 0.0;
        r.fugacity = 1.0;
        r.thermal_density = std::min(spec.total_density, constants::zeta_3_2 / volume);
        r.condensate_density = spec.total_density - r.thermal_density;
        r.condensate_fraction = r.condensate_density / spec.total_density;
        return r;
    }

    // g(z) >= z and g(z) <= z / (1 - z) bracket the root.
    double lo = std::log(d / (1.0 + d));
    double hi = std::min(std::log(d), 0.0);
    constexpr int max_steps = 200;
    int step = 0;
    while (hi - lo > 1e-12) {
        if (step == max_steps) {
            std::ostringstream msg;
            msg << "fugacity bisection did not converge in " << max_steps << " steps";
            throw NoConvergence(msg.str());
        }
        const double mid = 0.5 * (lo + hi);
        if (bose_g32(std::exp(mid)) < d)
            lo = mid;
        else
            hi = mid;
        ++step;
        if (trace)
            trace->emplace_back(lo, hi);
    }
    const double log_z = 0.5 * (lo + hi);
    r.iterations = step;
    r.fugacity = std::exp(log_z);
    r.mu = kT * log_z;
    r.thermal_density = spec.total_density;
    return r;
}

MomentumGrid thermal_momentum_grid(const EquilibriumSpec& spec, double extent, std::size_t points) {
    if (points < 3 || points % 2 == 0)
        throw DomainError("momentum grid needs an odd number of points >= 3");
    const ThermalWavelengths lambda = thermal_wavelengths(spec.temperature, spec.mass);
    const std::array<double, 3> scale{lambda.x, lambda.y, lambda.z};
    MomentumGrid grid;
    const double half = static_cast<double>(points / 2);
    for (int a = 0; a < 3; ++a) {
        const double k_max = extent * 2.0 * constants::pi / scale[a];
        grid.k[a].resize(points);
        for (std::size_t i = 0; i < points; ++i)
            grid.k[a][i] = k_max * (static_cast<double>(i) - half) / half;
    }
    return grid;
}

MomentumDistribution momentum_distribution(const EquilibriumSpec& spec,
                                           const ChemicalPotential& mu, const MomentumGrid& grid) {
    check_spec(spec);
    if (mu.mu > 0.0)
        throw DomainError("chemical potential must be <= 0");
    const double beta = 1.0 / (constants::k_B * spec.temperature);
    const double hb2 = constants::hbar * constants::hbar;
    const std::array<double, 3> inv_mass{1.0 / spec.mass.m_perp, 1.0 / spec.mass.m_perp,
                                         1.0 / spec.mass.m_par_dispersive};

    MomentumDistribution dist;
    dist.grid = grid;
    dist.condensate_density = mu.condensate_density;
    const auto& kx = grid.k[0];
    const auto& ky = grid.k[1];
    const auto& kz = grid.k[2];
    dist.occupation.resize(kx.size() * ky.size() * kz.size());

    auto spacing = [](const std::vector<double>& k) {
        return k.size() > 1 ? (k.back() - k.front()) / static_cast<double>(k.size() - 1) : 1.0;
    };
    const double cell = spacing(kx) * spacing(ky) * spacing(kz) / std::pow(2.0 * constants::pi, 3);

    double sum = 0.0;
    std::size_t idx = 0;
    for (double x : kx)
        for (double y : ky)
            for (double z : kz) {
                const double eps =
                    0.5 * hb2 * (x * x * inv_mass[0] + y * y * inv_mass[1] + z * z * inv_mass[2]);
                const double arg = beta * (eps - mu.mu);
                const double occ = arg > 0.0 ? 1.0 / std::expm1(arg) : 0.0;
                dist.occupation[idx++] = occ;
                sum += occ;
            }
    dist.thermal_density_quadrature = sum * cell;
    return dist;
}

EmissionProfile transverse_profile(const EquilibriumSpec& spec, const ChemicalPotential& mu,
                                   const ProfileOptions& options) {
    check_spec(spec);
    if (options.points < 4 || options.points % 2 != 0)
        throw DomainError("profile grid needs an even number of points >= 4");
    if (!(options.half_extent > 0.0))
        throw DomainError("profile extent must be positive");

    const ThermalWavelengths lambda = thermal_wavelengths(spec.temperature, spec.mass);
    EmissionProfile p;
    p.far_field_scale = 2.0 * constants::pi / lambda.x;
    p.condensate_fraction = mu.condensate_fraction;
    p.condensate_width = 1.0 / (spec.envelope_width * p.far_field_scale);
    p.mu = mu.mu;
    p.fugacity = mu.fugacity;
    const double t_c = ideal_gas_tc(spec.mass.m_eff_geometric, spec.total_density);
    p.t_over_tc = spec.temperature / t_c;

    const std::size_t n = options.points;
    const double h = 2.0 * options.half_extent / static_cast<double>(n);
    p.u.resize(n);
    p.thermal.resize(n);
    p.condensate.resize(n);
    p.total.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (static_cast<double>(i) + 0.5) * h - options.half_extent;
        p.u[i] = u;
        // exp(-beta eps_x) = exp(-pi u^2) in these units.
        p.thermal[i] = -std::log1p(-mu.fugacity * std::exp(-constants::pi * u * u));
        const double w = p.condensate_width;
        p.condensate[i] = std::exp(-0.5 * u * u / (w * w));
    }

    const double thermal_weight = 1.0 - p.condensate_fraction;
    const double thermal_norm = trapezoid(p.u, p.thermal);
    const double condensate_norm = trapezoid(p.u, p.condensate);
    for (std::size_t i = 0; i < n; ++i) {
        p.thermal[i] *= thermal_norm > 0.0 ? thermal_weight / thermal_norm : 0.0;
        p.condensate[i] *= condensate_norm > 0.0 ? p.condensate_fraction / condensate_norm : 0.0;
        p.total[i] = p.thermal[i] + p.condensate[i];
    }
    return p;
}

std::vector<Peak> local_maxima(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<Peak> peaks;
    const std::size_t n = y.size();
    if (n < 3 || x.size() != n)
        return peaks;
    auto crossing = [&](std::size_t inside, std::size_t outside, double level) {
        const double t = (y[inside] - level) / (y[inside] - y[outside]);
        return x[inside] + t * (x[outside] - x[inside]);
    };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]))
            continue;
        std::size_t right = i;
        while (right + 1 < n && y[right + 1] == y[i])
            ++right;
        if (right + 1 < n && y[right + 1] > y[i])
            continue;  // shoulder, not a maximum
        const double half = 0.5 * y[i];
        std::size_t l = i, r = right;
        while (l > 0 && y[l] > half)
            --l;
        while (r + 1 < n && y[r] > half)
            ++r;
        const double left_x = y[l] <= half ? crossing(l + 1, l, half) : x.front();
        const double right_x = y[r] <= half ? crossing(r - 1, r, half) : x.back();
        peaks.push_back({0.5 * (x[i] + x[right]), y[i], right_x - left_x});
        i = right;
    }
    return peaks;
}

double rms_width(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> first(x.size()), second(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        first[i] = x[i] * y[i];
        second[i] = x[i] * x[i] * y[i];
    }
    const double norm = trapezoid(x, y);
    if (!(norm > 0.0))
        return 0.0;
    const double mean = trapezoid(x, first) / norm;
    return std::sqrt(std::max(0.0, trapezoid(x, second) / norm - mean * mean));
}

} // namespace slp
