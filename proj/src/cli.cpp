#include "slp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "slp/config.hpp"
#include "slp/constants.hpp"
#include "slp/dispersion.hpp"
#include "slp/emission.hpp"
#include "slp/errors.hpp"
#include "slp/evolve.hpp"
#include "slp/io.hpp"
#include "slp/kinetics.hpp"
#include "slp/medium.hpp"
#include "slp/thermo.hpp"

namespace slp::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Sweep {
    std::string key;
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;

    double value(std::size_t i) const {
        if (points == 1)
            return start;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
};

Sweep parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    const auto c1 = spec.find(':', eq == std::string::npos ? 0 : eq);
    const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
    if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError("--sweep expects <key>=<start>:<stop>:<n>, got '" + spec + "'");
    Sweep s;
    s.key = spec.substr(0, eq);
    try {
        std::size_t used = 0;
        const std::string a = spec.substr(eq + 1, c1 - eq - 1);
        const std::string b = spec.substr(c1 + 1, c2 - c1 - 1);
        const std::string n = spec.substr(c2 + 1);
        s.start = std::stod(a, &used);
        if (used != a.size())
            throw std::invalid_argument(a);
        s.stop = std::stod(b, &used);
        if (used != b.size())
            throw std::invalid_argument(b);
        const long count = std::stol(n, &used);
        if (used != n.size() || count < 1)
            throw std::invalid_argument(n);
        s.points = static_cast<std::size_t>(count);
    } catch (const std::exception&) {
        throw ConfigError("malformed --sweep specification '" + spec + "'");
    }
    if (!Config::vocabulary().count(s.key))
        throw ConfigError("cannot sweep unknown key '" + s.key + "'");
    return s;
}

json quantity(double value, const char* unit) {
    return json{{"value", value}, {"unit", unit}};
}

json medium_json(const MediumParams& p) {
    return json{{"g", quantity(p.g, "rad m^1.5/s")},
                {"n", quantity(p.n, "1/m^3")},
                {"gamma", quantity(p.gamma, "rad/s")},
                {"delta_plus", quantity(p.delta_plus, "rad/s")},
                {"delta_minus", quantity(p.delta_minus, "rad/s")},
                {"omega_plus", quantity(p.omega_plus, "rad/s")},
                {"omega_minus", quantity(p.omega_minus, "rad/s")},
                {"k_p", quantity(p.k_p, "rad/m")},
                {"m_atom", quantity(p.m_atom, "kg")},
                {"delta_kerr", quantity(p.delta_kerr, "rad/s")},
                {"rho_dsp", quantity(p.rho_dsp, "1/m^3")}};
}

json scales_json(const DerivedScales& s) {
    return json{{"theta", quantity(s.theta, "rad")},
                {"phi", quantity(s.phi, "rad")},
                {"omega_total_sq", quantity(s.omega_total_sq, "rad^2/s^2")},
                {"v_gr", quantity(s.v_gr, "m/s")},
                {"l_abs", quantity(s.l_abs, "m")},
                {"v_rec", quantity(s.v_rec, "m/s")},
                {"tau", quantity(s.tau(), "s")}};
}

json mass_json(const MassTensor& m) {
    return json{{"m_perp", quantity(m.m_perp, "kg")},
                {"m_par_re", quantity(m.m_par.real(), "kg")},
                {"m_par_im", quantity(m.m_par.imag(), "kg")},
                {"inv_m_par_re", quantity(m.inv_m_par.real(), "1/kg")},
                {"inv_m_par_im", quantity(m.inv_m_par.imag(), "1/kg")},
                {"m_par_dispersive", quantity(m.m_par_dispersive, "kg")},
                {"m_eff_geometric", quantity(m.m_eff_geometric, "kg")}};
}

class Run {
public:
    Run(Config config, fs::path out_dir, std::ostream& out, std::ostream& err)
        : config_(std::move(config)), out_dir_(std::move(out_dir)), out_(out), err_(err) {}

    void tc(const std::optional<Sweep>& sweep);
    void rates(const std::optional<Sweep>& sweep);
    void mass(const std::optional<Sweep>& sweep);
    void dispersion();
    void evolve();
    void emit();

    void finish(const std::string& subcommand, const std::optional<Sweep>& sweep);

private:
    Config config_;
    fs::path out_dir_;
    std::ostream& out_;
    std::ostream& err_;
    std::vector<fs::path> outputs_;

    std::ofstream open(const std::string& name) {
        const fs::path path = out_dir_ / name;
        std::ofstream f(path);
        if (!f)
            throw std::runtime_error("cannot write " + path.string());
        outputs_.push_back(path);
        return f;
    }

    void write_json(const std::string& name, const json& j) {
        auto f = open(name);
        f << j.dump(2) << '\n';
    }

    json header(const std::string& subcommand, const MediumParams& p) const {
        json j;
        j["subcommand"] = subcommand;
        j["inputs"] = medium_json(p);
        j["derived"] = scales_json(derive_scales(p));
        return j;
    }

    void warn(const std::vector<std::string>& warnings) {
        for (const auto& w : warnings)
            err_ << "[W] " << w << '\n';
    }

    template <class Row>
    void run_sweep(const Sweep& sweep, const std::string& file, const std::vector<std::string>& header,
                   Row&& row);
};

template <class Row>
void Run::run_sweep(const Sweep& sweep, const std::string& file,
                    const std::vector<std::string>& columns, Row&& row) {
    auto f = open(file);
    std::vector<std::string> full{sweep.key};
    full.insert(full.end(), columns.begin(), columns.end());
    io::CsvWriter csv(f, full);
    for (std::size_t i = 0; i < sweep.points; ++i) {
        Config c = config_;
        const double v = sweep.value(i);
        c.set(sweep.key, io::format_double(v));
        std::vector<std::string> cells{io::format_double(v)};
        const std::vector<std::string> rest = row(c);
        cells.insert(cells.end(), rest.begin(), rest.end());
        csv.row(cells);
    }
}

void Run::tc(const std::optional<Sweep>& sweep) {
    const MediumParams p = load_medium(config_);
    const TcReport r = critical_temperature(p);
    const MassTensor m = mass_tensor(p);
    warn(r.warnings);

    json j = header("tc", p);
    j["outputs"] = json{{"t_c_atom", quantity(r.t_c_atom, "K")},
                        {"t_c_dsp", quantity(r.t_c_dsp, "K")},
                        {"t_c_geometric_mass", quantity(r.t_c_geometric, "K")},
                        {"ratio", quantity(r.ratio, "1")},
                        {"t_eit", quantity(r.t_eit, "K")},
                        {"feasible", r.feasible},
                        {"mass", mass_json(m)}};
    j["warnings"] = r.warnings;
    write_json("tc.json", j);
    out_ << "T_c/T_c^atom = " << io::format_double(r.ratio) << ", T_c = "
         << io::format_double(r.t_c_dsp) << " K, T_EIT = " << io::format_double(r.t_eit)
         << " K" << (r.feasible ? "" : " (above the EIT ceiling)") << '\n';

    if (sweep) {
        run_sweep(*sweep, "tc_sweep.csv", {"t_c_atom", "t_c_dsp", "ratio", "t_eit", "feasible"},
                  [](const Config& c) {
                      const TcReport s = critical_temperature(load_medium(c));
                      return std::vector<std::string>{
                          io::format_double(s.t_c_atom), io::format_double(s.t_c_dsp),
                          io::format_double(s.ratio), io::format_double(s.t_eit),
                          s.feasible ? "1" : "0"};
                  });
    }
}

void Run::rates(const std::optional<Sweep>& sweep) {
    const MediumParams p = load_medium(config_);
    const double length = config_.number("pulse_length");
    const RateReport r = rate_report(p, length);
    const MeanFieldCoefficients c = master_equation_coefficients(p);
    warn(r.warnings);

    json j = header("rates", p);
    j["inputs"]["pulse_length"] = quantity(length, "m");
    j["outputs"] = json{{"u_elastic", quantity(r.u_elastic, "J m^3")},
                        {"gamma_coll", quantity(r.gamma_coll, "1/s")},
                        {"gamma_loss_nl", quantity(r.gamma_loss_nl, "1/s")},
                        {"gamma_loss_lin", quantity(r.gamma_loss_lin, "1/s")},
                        {"tau", quantity(r.tau, "s")},
                        {"od_required", quantity(r.od_required, "1")},
                        {"od_actual", quantity(r.od_actual, "1")},
                        {"od_pass", r.od_pass},
                        {"coll_faster_than_nl", r.coll_faster_than_nl},
                        {"coll_faster_than_lin", r.coll_faster_than_lin},
                        {"hierarchy_ok", r.hierarchy_ok}};
    j["master_equation"] = json{{"elastic", quantity(c.elastic, "m^3/s")},
                                {"dispersive", quantity(c.dispersive, "m^6/s")},
                                {"anticommutator", quantity(c.anticommutator, "m^6/s")},
                                {"jump", quantity(c.jump, "m^6/s")}};
    if (config_.has("pulse_time")) {
        const std::string dir = config_.text("time_inequality", "slowly_varying");
        if (dir != "slowly_varying" && dir != "as_written")
            throw ConfigError("time_inequality must be 'slowly_varying' or 'as_written'");
        const AdiabaticityReport a = validate_adiabaticity(
            p, config_.number("pulse_time"), length,
            dir == "as_written" ? TimeInequality::AsWritten : TimeInequality::SlowlyVarying,
            config_.number("adiabatic_factor", 10.0));
        j["adiabaticity"] = json{{"length_ratio", a.length_ratio},
                                 {"time_ratio_light", a.time_ratio_light},
                                 {"time_ratio_decay", a.time_ratio_decay},
                                 {"tau", quantity(a.tau, "s")},
                                 {"required_factor", a.required_factor},
                                 {"length_ok", a.length_ok},
                                 {"time_ok_as_written", a.time_ok_as_written},
                                 {"time_ok_slowly_varying", a.time_ok_slowly_varying},
                                 {"direction", dir},
                                 {"direction_ambiguous", a.direction_ambiguous},
                                 {"pass", a.pass}};
    }
    j["warnings"] = r.warnings;
    write_json("rates.json", j);
    out_ << "Gamma_coll = " << io::format_double(r.gamma_coll) << " 1/s, tau = "
         << io::format_double(r.tau) << " s, OD required " << io::format_double(r.od_required)
         << (r.od_pass ? " (pass)" : " (fail)") << '\n';

    if (sweep) {
        run_sweep(*sweep, "rates_sweep.csv",
                  {"gamma_coll", "gamma_loss_nl", "gamma_loss_lin", "tau", "od_required",
                   "od_actual", "od_pass", "hierarchy_ok"},
                  [](const Config& c) {
                      const RateReport s = rate_report(load_medium(c), c.number("pulse_length"));
                      return std::vector<std::string>{
                          io::format_double(s.gamma_coll), io::format_double(s.gamma_loss_nl),
                          io::format_double(s.gamma_loss_lin), io::format_double(s.tau),
                          io::format_double(s.od_required), io::format_double(s.od_actual),
                          s.od_pass ? "1" : "0", s.hierarchy_ok ? "1" : "0"};
                  });
    }
}

void Run::mass(const std::optional<Sweep>& sweep) {
    const MediumParams p = load_medium(config_);
    const MassTensor m = mass_tensor(p);
    warn(m.warnings);
    BlochOptions options;
    options.lossless = config_.flag("lossless", false);
    const CurvatureFit fit = fit_dark_curvature(p, options, config_.number("fit_window_l_abs", 0.01),
                                                config_.count("fit_points", 21));
    const cplx analytic = analytic_curvature(p, options);
    const double transverse = transverse_curvature(p, options);
    const DerivedScales s = derive_scales(p);

    json j = header("mass", p);
    j["inputs"]["lossless"] = options.lossless;
    j["outputs"] = json{
        {"mass", mass_json(m)},
        {"fit",
         json{{"curvature_re", quantity(fit.curvature.real(), "m^2/s")},
              {"curvature_im", quantity(fit.curvature.imag(), "m^2/s")},
              {"linear_re", quantity(fit.linear.real(), "m/s")},
              {"linear_im", quantity(fit.linear.imag(), "m/s")},
              {"m_par_re", quantity(fit.m_par.real(), "kg")},
              {"m_par_im", quantity(fit.m_par.imag(), "kg")},
              {"relative_residual", fit.relative_residual},
              {"window_k_max", quantity(fit.k_max, "rad/m")},
              {"points", fit.points}}},
        {"analytic_curvature_re", quantity(analytic.real(), "m^2/s")},
        {"analytic_curvature_im", quantity(analytic.imag(), "m^2/s")},
        {"transverse_curvature", quantity(transverse, "m^2/s")},
        {"transverse_curvature_expected", quantity(s.v_gr / (2.0 * p.k_p), "m^2/s")}};
    j["warnings"] = m.warnings;
    write_json("mass.json", j);
    out_ << "m_perp = " << io::format_double(m.m_perp) << " kg, fitted C = "
         << io::format_double(fit.curvature.real()) << " + "
         << io::format_double(fit.curvature.imag()) << "i m^2/s\n";

    if (sweep) {
        run_sweep(*sweep, "mass_sweep.csv", {"m_perp", "m_par_dispersive", "m_eff_geometric"},
                  [](const Config& c) {
                      const MassTensor t = mass_tensor(load_medium(c));
                      return std::vector<std::string>{io::format_double(t.m_perp),
                                                      io::format_double(t.m_par_dispersive),
                                                      io::format_double(t.m_eff_geometric)};
                  });
    }
}

void Run::dispersion() {
    const MediumParams p = load_medium(config_);
    const DerivedScales s = derive_scales(p);
    BlochOptions options;
    options.lossless = config_.flag("lossless", false);
    const double k_max = config_.number("k_max_l_abs", 20.0) / s.l_abs;
    const std::size_t points = config_.count("k_points", 2001);
    const double k_perp = config_.number("k_perp", 0.0);
    const BandStructure bands = band_structure(p, symmetric_grid(k_max, points), k_perp, options);
    {
        auto f = open("dispersion.csv");
        io::write_bands_csv(f, bands);
    }

    const Branch& dark = bands.dark();
    double top = dark.omega.front().real(), bottom = top;
    for (const cplx& w : dark.omega) {
        top = std::max(top, w.real());
        bottom = std::min(bottom, w.real());
    }
    json j = header("dispersion", p);
    j["inputs"]["lossless"] = options.lossless;
    j["inputs"]["k_max"] = quantity(k_max, "rad/m");
    j["inputs"]["k_points"] = points;
    j["inputs"]["k_perp"] = quantity(k_perp, "rad/m");
    json labels = json::array();
    for (const Branch& b : bands.branches)
        labels.push_back(b.label);
    j["outputs"] = json{{"branches", labels},
                        {"dark_index", bands.dark_index},
                        {"min_overlap", bands.min_overlap},
                        {"dark_band_width", quantity(top - bottom, "rad/s")}};
    if (k_perp == 0.0) {
        const CurvatureFit fit =
            fit_dark_curvature(p, options, config_.number("fit_window_l_abs", 0.01),
                               config_.count("fit_points", 21));
        const cplx analytic = analytic_curvature(p, options);
        j["outputs"]["dark_curvature_re"] = quantity(fit.curvature.real(), "m^2/s");
        j["outputs"]["dark_curvature_im"] = quantity(fit.curvature.imag(), "m^2/s");
        j["outputs"]["analytic_curvature_re"] = quantity(analytic.real(), "m^2/s");
        j["outputs"]["analytic_curvature_im"] = quantity(analytic.imag(), "m^2/s");
        j["outputs"]["fit_relative_residual"] = fit.relative_residual;
    }
    write_json("dispersion.json", j);
    out_ << "5 branches over " << points << " k-points; dark band width "
         << io::format_double(top - bottom) << " rad/s\n";
}

void Run::evolve() {
    const MediumParams p = load_medium(config_);
    validate(p);

    EvolutionConfig cfg;
    cfg.dt = config_.number("dt");
    cfg.t_final = config_.number("t_final");
    cfg.elastic = config_.flag("elastic", true);
    cfg.dispersive_shift = config_.flag("dispersive_shift", true);
    cfg.nonlinear_loss = config_.flag("nonlinear_loss", true);
    cfg.high_k_absorption = config_.flag("high_k_absorption", true);
    const std::string sign = config_.text("interaction_sign", "derived");
    if (sign != "derived" && sign != "repulsive")
        throw ConfigError("interaction_sign must be 'derived' or 'repulsive'");
    cfg.sign = sign == "derived" ? InteractionSign::Derived : InteractionSign::Repulsive;
    if (sign == "derived")
        err_ << "[W] interaction sign as derived: attractive for delta_kerr > 0\n";
    cfg.release_time = config_.optional_number("release_time");
    const std::string dir = config_.text("release_direction", "+z");
    if (dir != "+z" && dir != "-z")
        throw ConfigError("release_direction must be '+z' or '-z'");
    cfg.release_direction = dir == "+z" ? Direction::PlusZ : Direction::MinusZ;

    FieldState initial;
    const std::string kind = config_.text("initial", "gaussian");
    if (kind == "snapshot") {
        initial = io::read_snapshot(config_.text("initial_snapshot", ""));
    } else {
        Grid grid;
        grid.shape = {config_.count("nx", 1), config_.count("ny", 1), config_.count("nz", 4096)};
        grid.box = {config_.number("box_x", 1.0), config_.number("box_y", 1.0),
                    config_.number("box_z")};
        if (kind == "gaussian") {
            const std::array<double, 3> width{config_.number("initial_width_x", 0.0),
                                              config_.number("initial_width_y", 0.0),
                                              config_.number("initial_width_z")};
            initial = gaussian_state(grid, width, config_.number("initial_number"),
                                     {0.0, 0.0, config_.number("initial_k_z", 0.0)});
        } else if (kind == "uniform") {
            initial = plane_wave_state(grid, config_.number("initial_density"),
                                       {0.0, 0.0, config_.number("initial_k_z", 0.0)});
        } else {
            throw ConfigError("initial must be 'gaussian', 'uniform' or 'snapshot'");
        }
    }
    if (config_.has("noise"))
        add_noise(initial, config_.number("noise"), config_.count("seed", 1));

    io::write_snapshot(out_dir_ / "snapshot_initial", initial);
    outputs_.push_back(out_dir_ / "snapshot_initial.bin");
    outputs_.push_back(out_dir_ / "snapshot_initial.json");

    const RunResult result = run_evolution(initial, cfg, p, config_.count("record_every", 100));

    {
        auto f = open("observables.csv");
        io::CsvWriter csv(f, {"time", "norm", "rms_x", "rms_y", "rms_z", "peak_density",
                              "k0_population"});
        for (const Observables& o : result.series)
            csv.row({io::format_double(o.time), io::format_double(o.norm),
                     io::format_double(o.rms_width[0]), io::format_double(o.rms_width[1]),
                     io::format_double(o.rms_width[2]), io::format_double(o.peak_density),
                     io::format_double(o.k0_population)});
    }
    io::write_snapshot(out_dir_ / "snapshot_final", result.final_state);
    outputs_.push_back(out_dir_ / "snapshot_final.bin");
    outputs_.push_back(out_dir_ / "snapshot_final.json");

    json j = header("evolve", p);
    j["inputs"]["dt"] = quantity(cfg.dt, "s");
    j["inputs"]["t_final"] = quantity(cfg.t_final, "s");
    j["inputs"]["toggles"] = json{{"elastic", cfg.elastic},
                                  {"dispersive_shift", cfg.dispersive_shift},
                                  {"nonlinear_loss", cfg.nonlinear_loss},
                                  {"high_k_absorption", cfg.high_k_absorption},
                                  {"interaction_sign", sign}};
    const Observables first = result.series.front();
    const Observables last = result.series.back();
    j["outputs"] = json{{"initial_norm", first.norm},
                        {"final_norm", last.norm},
                        {"final_time", quantity(last.time, "s")},
                        {"final_rms_width_m", last.rms_width},
                        {"final_peak_density", quantity(last.peak_density, "1/m^3")}};

    if (result.pulse) {
        const EmittedPulse& pulse = *result.pulse;
        const Grid& g = result.final_state.grid;
        {
            auto f = open("pulse.csv");
            io::CsvWriter csv(f, {"time", "photon_rate"});
            for (std::size_t t = 0; t < pulse.times.size(); ++t) {
                double rate = 0.0;
                for (std::size_t i = 0; i < pulse.nx * pulse.ny; ++i)
                    rate += pulse.intensity[t * pulse.nx * pulse.ny + i];
                csv.row({io::format_double(pulse.times[t]),
                         io::format_double(rate * g.spacing(0) * g.spacing(1))});
            }
        }
        {
            auto f = open("pulse_profile.csv");
            io::CsvWriter csv(f, {"x", "y", "fluence"});
            for (std::size_t ix = 0; ix < pulse.nx; ++ix)
                for (std::size_t iy = 0; iy < pulse.ny; ++iy)
                    csv.row({io::format_double(g.coordinate(0, ix)),
                             io::format_double(g.coordinate(1, iy)),
                             io::format_double(pulse.transverse_profile[ix * pulse.ny + iy])});
        }
        j["outputs"]["release"] = json{{"direction", dir},
                                       {"v_gr", quantity(pulse.v_gr, "m/s")},
                                       {"duration", quantity(pulse.duration, "s")},
                                       {"total_quanta", pulse.total_quanta}};
    }
    write_json("evolve.json", j);
    out_ << "evolved to t = " << io::format_double(last.time) << " s; norm "
         << io::format_double(first.norm) << " -> " << io::format_double(last.norm) << '\n';
}

void Run::emit() {
    const MediumParams p = load_medium(config_);
    if (!(p.rho_dsp > 0.0 && p.rho_dsp < p.n))
        throw DomainError("emission needs 0 < rho_dsp < n");
    const MassTensor m = mass_tensor(p);
    const double t_c = ideal_gas_tc(m.m_eff_geometric, p.rho_dsp);
    double temperature = 0.0;
    if (config_.has("temperature") && config_.has("t_over_tc"))
        throw ConfigError("give either temperature or t_over_tc, not both");
    if (config_.has("temperature"))
        temperature = config_.number("temperature");
    else
        temperature = config_.number("t_over_tc") * t_c;

    const EquilibriumSpec spec =
        make_equilibrium(temperature, p.rho_dsp, m, config_.number("envelope_factor", 178.0));
    const ChemicalPotential mu = chemical_potential(spec);
    ProfileOptions options;
    options.half_extent = config_.number("profile_half_extent", options.half_extent);
    options.points = config_.count("profile_points", options.points);
    const EmissionProfile profile = transverse_profile(spec, mu, options);
    {
        auto f = open("emission.csv");
        io::write_emission_csv(f, profile);
    }

    const std::vector<Peak> peaks = local_maxima(profile.u, profile.total);
    const double thermal_width = rms_width(profile.u, profile.thermal);
    bool narrow_peak = false;
    for (const Peak& peak : peaks)
        narrow_peak = narrow_peak || peak.fwhm < thermal_width;

    json peak_list = json::array();
    for (const Peak& peak : peaks)
        peak_list.push_back(json{{"u", peak.position}, {"height", peak.height}, {"fwhm_u", peak.fwhm}});

    json j = header("emit", p);
    j["inputs"]["temperature"] = quantity(temperature, "K");
    j["inputs"]["envelope_width"] = quantity(spec.envelope_width, "m");
    j["outputs"] = json{{"t_c", quantity(t_c, "K")},
                        {"t_over_tc", profile.t_over_tc},
                        {"mu", quantity(mu.mu, "J")},
                        {"fugacity", mu.fugacity},
                        {"phase_space_density", mu.phase_space_density},
                        {"condensate_fraction", mu.condensate_fraction},
                        {"thermal_fraction", 1.0 - mu.condensate_fraction},
                        {"far_field_scale", quantity(profile.far_field_scale, "rad/m per unit u")},
                        {"condensate_width_u", profile.condensate_width},
                        {"thermal_rms_width_u", thermal_width},
                        {"peaks", peak_list},
                        {"narrow_peak", narrow_peak}};
    write_json("emission.json", j);
    out_ << "T/T_c = " << io::format_double(profile.t_over_tc) << ", condensate fraction "
         << io::format_double(mu.condensate_fraction)
         << (narrow_peak ? ", central peak present\n" : ", no condensate peak\n");
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

void Run::finish(const std::string& subcommand, const std::optional<Sweep>& sweep) {
    for (const auto& key : config_.unused_keys())
        err_ << "[W] config key '" << key << "' is not used by '" << subcommand << "'\n";

    json manifest;
    manifest["subcommand"] = subcommand;
    manifest["version"] = version;
    manifest["timestamp"] = utc_timestamp();
    manifest["config"] = config_.values();
    if (sweep)
        manifest["sweep"] = json{{"key", sweep->key},
                                 {"start", sweep->start},
                                 {"stop", sweep->stop},
                                 {"points", sweep->points}};
    json files = json::array();
    for (const auto& path : outputs_)
        files.push_back(json{{"file", path.filename().string()}, {"sha256", io::sha256_file(path)}});
    manifest["outputs"] = files;
    std::ofstream f(out_dir_ / "manifest.json");
    f << manifest.dump(2) << '\n';
}

int report_error(std::ostream& err, const std::optional<fs::path>& out_dir, int code,
                 const std::string& kind, const std::string& message) {
    const json report{{"error", kind}, {"message", message}, {"exit_code", code}};
    err << report.dump() << '\n';
    if (out_dir && fs::is_directory(*out_dir)) {
        std::ofstream f(*out_dir / "error.json");
        f << report.dump(2) << '\n';
    }
    return code;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stationary-light dark-state polariton condensation toolkit", "slpbec"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    std::string config_path;
    std::string out_dir = "out";
    std::string sweep_spec;
    const std::vector<std::pair<const char*, const char*>> commands{
        {"dispersion", "Polariton band structure over a k grid (CSV)"},
        {"mass", "Effective mass tensor and dark-branch curvature fits"},
        {"tc", "Critical temperatures and the EIT ceiling"},
        {"rates", "Collision and loss rates, optical-depth criterion"},
        {"evolve", "Mean-field evolution of the dark-polariton envelope"},
        {"emit", "Transverse emission profile of the equilibrium gas"}};
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "key = value configuration file")->required();
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        const std::string n = name;
        if (n == "tc" || n == "rates" || n == "mass")
            sub->add_option("--sweep", sweep_spec, "<key>=<start>:<stop>:<n> linear sweep");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty())
        reversed.pop_back();  // program name
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << app.help();
        return report_error(err, std::nullopt, 2, "UsageError", e.what());
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    std::optional<fs::path> out_path;
    try {
        std::optional<Sweep> sweep;
        if (!sweep_spec.empty())
            sweep = parse_sweep(sweep_spec);
        Config config = Config::load(config_path);
        out_path = fs::path(out_dir);
        fs::create_directories(*out_path);
        fs::remove(*out_path / "error.json");
        Run run(std::move(config), *out_path, out, err);
        if (subcommand == "tc")
            run.tc(sweep);
        else if (subcommand == "rates")
            run.rates(sweep);
        else if (subcommand == "mass")
            run.mass(sweep);
        else if (subcommand == "dispersion")
            run.dispersion();
        else if (subcommand == "evolve")
            run.evolve();
        else
            run.emit();
        run.finish(subcommand, sweep);
        return 0;
    } catch (const ConfigError& e) {
        return report_error(err, out_path, 2, "ConfigError", e.what());
    } catch (const DomainError& e) {
        return report_error(err, out_path, 3, "DomainError", e.what());
    } catch (const NumericalError& e) {
        return report_error(err, out_path, 4, e.kind(), e.what());
    } catch (const std::exception& e) {
        return report_error(err, out_path, 1, "IOError", e.what());
    }
}

int run(int argc, char** argv) {
    return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

} // namespace slp::cli
