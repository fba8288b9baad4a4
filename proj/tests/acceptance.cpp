// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "slp/cli.hpp"
#include "slp/dispersion.hpp"
#include "slp/emission.hpp"
#include "slp/kinetics.hpp"
#include "slp/special.hpp"
#include "slp/thermo.hpp"
#include "evolve_cases.hpp"

using namespace slp;
using json = nlohmann::json;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
    std::printf("%s %-28s %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

std::string fmt(const char* format, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, format, args...);
    return buffer;
}

double seconds(const std::function<void()>& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::filesystem::path scratch(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("slpbec_acceptance_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

json cli_json(const std::string& sub, const std::string& config_text, const std::string& file,
              double& elapsed) {
    const auto dir = scratch(sub);
    std::ofstream(dir / "run.cfg") << config_text;
    std::ostringstream out, err;
    int code = 0;
    elapsed = seconds([&] {
        code = cli::run({"slpbec", sub, "--config", (dir / "run.cfg").string(), "--out",
                         (dir / "out").string()},
                        out, err);
    });
    if (code != 0)
        throw std::runtime_error(sub + " exited with " + std::to_string(code) + ": " + err.str());
    std::ifstream in(dir / "out" / file);
    return json::parse(in);
}

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(SLP_SOURCE_DIR) + "/configs/" + name);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    if (pos == std::string::npos)
        throw std::runtime_error("config line '" + from + "' not found");
    return text.replace(pos, from.size(), to);
}

double value(const json& j, const char* key) { return j["outputs"][key]["value"]; }

void guarded(const std::string& id, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

} // namespace

int main() {
    const std::string vapor = slurp("vapor.cfg");

    guarded("tc_ratio", [&] {
        double t = 0.0;
        const json j = cli_json("tc", vapor, "tc.json", t);
        const double ratio = value(j, "ratio");
        report("tc_ratio", std::abs(ratio / 6e5 - 1.0) <= 0.05 && t < 1.0,
               fmt("T_c/T_c^atom = %.6g (target 6e5 +- 5%%), runtime %.3f s", ratio, t));
    });

    guarded("collision_rates", [&] {
        double t1 = 0.0, t2 = 0.0;
        const json a = cli_json("rates", vapor, "rates.json", t1);
        const json b = cli_json("rates", replace(vapor, "l_abs = 0.01", "l_abs = 1e-5"), "rates.json", t2);
        const double g1 = value(a, "gamma_coll"), g2 = value(b, "gamma_coll");
        const double tau1 = value(a, "tau"), tau2 = value(b, "tau");
        const bool pass = test::close(g1, 1e2, 1e-12) && test::close(g2, 1e5, 1e-12) &&
                          test::close(tau1, 1e-5, 1e-12) && test::close(tau2, 1e-8, 1e-12) &&
                          t1 < 1.0 && t2 < 1.0;
        report("collision_rates", pass,
               fmt("Gamma_coll = %.15g, %.15g 1/s; tau = %.15g, %.15g s; runtime %.3f, %.3f s", g1,
                   g2, tau1, tau2, t1, t2));
    });

    guarded("od_criterion", [&] {
        const OdCriterion od = od_criterion(test::vapor(), 0.5);
        report("od_criterion", std::abs(od.od_required - 31.6228) <= 1e-4,
               fmt("od_required = %.10f (31.6228 +- 1e-4)", od.od_required));
    });

    guarded("dispersion_bands", [&] {
        const MediumParams p = test::symmetric();
        const BlochOptions lossless{true};
        const double l_abs = derive_scales(p).l_abs;
        BandStructure band;
        const double t = seconds([&] {
            band = band_structure(p, symmetric_grid(20.0 / l_abs, 2001), 0.0, lossless);
        });
        double worst_imag = 0.0, scale = 0.0;
        for (const Branch& b : band.branches)
            for (const cplx& w : b.omega) {
                worst_imag = std::max(worst_imag, std::abs(w.imag()));
                scale = std::max(scale, std::abs(w));
            }
        const Branch& dark = band.dark();
        const double omega0 = std::abs(dark.omega[1000]);
        double top = -1e300, bottom = 1e300;
        for (const cplx& w : dark.omega) {
            top = std::max(top, w.real());
            bottom = std::min(bottom, w.real());
        }
        const double width = (top - bottom) / p.delta();

        const CurvatureFit fit = fit_dark_curvature(p, lossless);
        const double closed = analytic_curvature(p, lossless).real();
        const double k_min = fit.k_max / 10.0;  // smallest non-zero fit-grid k
        const double slope_ratio =
            std::abs(fit.linear) * k_min / (std::abs(fit.curvature) * k_min * k_min);
        const double curvature_error = std::abs(fit.curvature.real() / closed - 1.0);

        const bool pass = worst_imag <= 1e-10 * scale && omega0 <= 1e-12 * scale &&
                          slope_ratio < 1e-10 && curvature_error <= 0.01 && fit.k_max * l_abs <= 0.01 &&
                          width >= 1.0 / 3.0 && width <= 3.0 && t < 5.0;
        report("dispersion_bands", pass,
               fmt("5 branches, max|Im w|/max|w| = %.2g, |w_dark(0)| = %.2g rad/s, "
                   "linear/quadratic = %.2g, curvature error %.2g (window %.0e), "
                   "band width %.4f Delta, 2001 points in %.3f s",
                   worst_imag / scale, omega0, slope_ratio, curvature_error, fit.k_max * l_abs,
                   width, t));
    });

    guarded("transverse_curvature", [&] {
        const MediumParams p = test::symmetric();
        const double expected = derive_scales(p).v_gr / (2.0 * p.k_p);
        const double got = transverse_curvature(p, {true});
        const double err = std::abs(got / expected - 1.0);
        report("transverse_curvature", err <= 1e-6,
               fmt("d w / d k_perp^2 = %.12g vs v_gr/(2 k_p) = %.12g, rel. error %.2g", got,
                   expected, err));
    });

    guarded("evolve_a_free_spreading", [&] {
        const test::WidthLaw w = test::free_spreading();
        const double err = std::abs(w.measured / w.expected - 1.0);
        report("evolve_a_free_spreading", err <= 5e-3 && w.spreading >= 3.0,
               fmt("width %.6g m vs law %.6g m after %.3fx spreading, rel. error %.2g", w.measured,
                   w.expected, w.spreading, err));
    });

    guarded("evolve_b_norm", [&] {
        const double drift = test::norm_drift_per_1000_steps();
        report("evolve_b_norm", drift <= 1e-10,
               fmt("relative norm change over 1000 loss-free steps %.2g (<= 1e-10)", drift));
    });

    guarded("evolve_c_high_k_damping", [&] {
        double worst = 0.0;
        for (int mode : {10, 40, 100}) {
            const test::Rate r = test::high_k_damping(mode);
            worst = std::max(worst, std::abs(r.measured / r.expected - 1.0));
        }
        report("evolve_c_high_k_damping", worst <= 0.01,
               fmt("single-mode decay vs 2 v_gr L_abs k^2, worst rel. error %.2g over 3 modes", worst));
    });

    guarded("evolve_d_cubic_loss", [&] {
        const test::CubicDecay d = test::cubic_loss_decay();
        report("evolve_d_cubic_loss", d.worst_relative_error <= 0.01 && std::abs(d.slope - 2.0) <= 0.05,
               fmt("worst deviation from exact decay %.2g, log-log slope %.4f, "
                   "rate / collision-loss estimate %.3g",
                   d.worst_relative_error, d.slope, d.mean_field_over_estimate));
    });

    guarded("evolve_e_dt_convergence", [&] {
        const double ratio = test::splitting_order_ratio();
        report("evolve_e_dt_convergence", ratio >= 3.6 && ratio <= 4.4,
               fmt("error(dt)/error(dt/2) = %.4f (3.6 .. 4.4)", ratio));
    });

    const MassTensor mass = mass_tensor(test::vapor());
    const double density = 1e15;
    const double t_c = ideal_gas_tc(mass.m_eff_geometric, density);

    guarded("emission_above_tc", [&] {
        const EquilibriumSpec spec = make_equilibrium(1.2 * t_c, density, mass);
        const EmissionProfile p = transverse_profile(spec, chemical_potential(spec));
        const double thermal = rms_width(p.u, p.thermal);
        double narrowest = 1e300;
        const auto peaks = local_maxima(p.u, p.total);
        for (const Peak& k : peaks)
            narrowest = std::min(narrowest, k.fwhm);
        report("emission_above_tc", narrowest > thermal,
               fmt("T = 1.2 T_c: %zu maximum, narrowest FWHM %.4f vs thermal rms width %.4f (u units)",
                   peaks.size(), narrowest, thermal));
    });

    guarded("emission_below_tc", [&] {
        const EquilibriumSpec spec = make_equilibrium(0.8 * t_c, density, mass);
        const EmissionProfile p = transverse_profile(spec, chemical_potential(spec));
        const double thermal = rms_width(p.u, p.thermal);
        const auto peaks = local_maxima(p.u, p.total);
        Peak central{0, -1, 0};
        for (const Peak& k : peaks)
            if (k.height > central.height)
                central = k;
        double weight = 0.0;
        for (std::size_t i = 1; i < p.u.size(); ++i)
            weight += 0.5 * (p.total[i] - p.thermal[i] + p.total[i - 1] - p.thermal[i - 1]) *
                      (p.u[i] - p.u[i - 1]);
        const double target = 1.0 - std::pow(0.8, 1.5);
        const double reciprocal = 1.0 / (2.0 * constants::pi * 178.0);
        const double gaussian_fwhm = 2.0 * std::sqrt(2.0 * std::log(2.0)) * reciprocal;
        const bool pass = std::abs(central.position) < 1e-3 && central.fwhm < thermal &&
                          std::abs(weight / target - 1.0) <= 0.01 &&
                          std::abs(p.condensate_width / reciprocal - 1.0) < 1e-12 &&
                          central.fwhm > gaussian_fwhm / 1.5 && central.fwhm < gaussian_fwhm * 1.5;
        report("emission_below_tc", pass,
               fmt("T = 0.8 T_c: central peak FWHM %.3g (Gaussian 1/(2 pi 178) -> %.3g) vs thermal "
                   "width %.3g; weight %.6f vs %.6f",
                   central.fwhm, gaussian_fwhm, thermal, weight, target));
    });

    guarded("emission_boltzmann_mu", [&] {
        EquilibriumSpec spec = make_equilibrium(t_c, density, mass);
        const ThermalWavelengths l = thermal_wavelengths(spec.temperature, mass);
        spec.total_density = 1e-4 / (l.x * l.y * l.z);
        const ChemicalPotential mu = chemical_potential(spec);
        const double boltzmann = constants::k_B * spec.temperature * std::log(1e-4);
        const double err = std::abs(mu.mu / boltzmann - 1.0);
        report("emission_boltzmann_mu", err <= 1e-3,
               fmt("n lambda^3 = 1e-4: mu / (k_B T ln(n lambda^3)) - 1 = %.2g", err));
    });

    guarded("emission_quadrature", [&] {
        const EquilibriumSpec spec = make_equilibrium(1.5 * t_c, density, mass);
        const ChemicalPotential mu = chemical_potential(spec);
        const MomentumDistribution d = momentum_distribution(spec, mu, thermal_momentum_grid(spec));
        const double err = std::abs(d.thermal_density_quadrature / mu.thermal_density - 1.0);
        report("emission_quadrature", err <= 5e-3,
               fmt("momentum-grid density vs g_3/2(z)/lambda^3: rel. error %.2g", err));
    });

    guarded("identities", [&] {
        std::mt19937_64 rng(20240611);
        double worst_rate = 0.0, worst_tc = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const MediumParams p = test::random_medium(rng);
            const double ratio = std::abs(p.delta_kerr) / p.gamma * (p.n / p.rho_dsp);
            const RateReport r = rate_report(p, derive_scales(p).l_abs * 50.0);
            worst_rate = std::max(worst_rate, std::abs(r.gamma_coll / r.gamma_loss_nl / ratio - 1.0));
            const TcReport t = critical_temperature(p);
            worst_tc = std::max(worst_tc, std::abs(t.t_c_dsp / t.t_c_geometric - 1.0));
        }
        report("identities", worst_rate <= 1e-12 && worst_tc <= 1e-10,
               fmt("1000 random media: Gamma_coll/Gamma_nl identity %.2g, closed-form T_c vs geometric mass %.2g",
                   worst_rate, worst_tc));
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
