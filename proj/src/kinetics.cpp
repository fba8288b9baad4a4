#include "slp/kinetics.hpp"

#include <cmath>

#include "slp/constants.hpp"
#include "slp/errors.hpp"

namespace slp {

namespace {

// Needs no gamma, so the Hamiltonian limit gamma = 0 stays available.
double cos2_theta(const MediumParams& params) {
    const double omega2 = params.omega_total_sq();
    if (!(omega2 > 0.0))
        throw DomainError("at least one control field must be on (theta undefined)");
    return omega2 / (omega2 + params.g2n());
}

void require_kerr(const MediumParams& params) {
    if (params.delta_kerr == 0.0 || !std::isfinite(params.delta_kerr))
        throw DomainError("delta_kerr must be finite and non-zero");
}

// (gamma / |delta_kerr|) (rho_dsp / n)
double small_parameter(const MediumParams& params) {
    require_kerr(params);
    return params.gamma / std::abs(params.delta_kerr) * (params.rho_dsp / params.n);
}

double inverse_tau(const MediumParams& params) {
    const DerivedScales s = derive_scales(params);
    return s.v_gr / s.l_abs;
}

void require_length(double pulse_length) {
    if (!(pulse_length > 0.0))
        throw DomainError("pulse length must be positive");
}

} // namespace

double kerr_coupling(const MediumParams& params, std::vector<std::string>* warnings) {
    require_kerr(params);
    const double cos2 = cos2_theta(params);
    if (warnings && cos2 > 0.1)
        warnings->push_back("cos^2 theta > 0.1: the sin(theta) ~ 1 reduction of the Kerr term is poor");
    return -constants::hbar * params.g * params.g * cos2 / params.delta_kerr;
}

double collision_rate(const MediumParams& params) {
    return inverse_tau(params) * small_parameter(params);
}

LossRates loss_rates(const MediumParams& params, double pulse_length) {
    require_length(pulse_length);
    const double x = small_parameter(params);
    const DerivedScales s = derive_scales(params);
    const double ratio = s.l_abs / pulse_length;
    return {s.v_gr / s.l_abs * x * x, s.v_gr / s.l_abs * ratio * ratio};
}

OdCriterion od_criterion(const MediumParams& params, double pulse_length) {
    require_length(pulse_length);
    require_kerr(params);
    if (!(params.rho_dsp > 0.0))
        throw DomainError("optical depth criterion needs rho_dsp > 0");
    OdCriterion od;
    od.od_actual = pulse_length / derive_scales(params).l_abs;
    od.od_required =
        std::sqrt(std::abs(params.delta_kerr) / params.gamma * (params.n / params.rho_dsp));
    od.pass = od.od_actual > od.od_required;
    od.at_boundary = od.od_actual == od.od_required;
    return od;
}

MeanFieldCoefficients master_equation_coefficients(const MediumParams& params) {
    require_kerr(params);
    const double g2c2 = params.g * params.g * cos2_theta(params);
    const double kerr2 = params.delta_kerr * params.delta_kerr;
    MeanFieldCoefficients c;
    c.elastic = g2c2 / params.delta_kerr;
    c.dispersive = 4.0 * g2c2 * params.delta() / (params.n * kerr2);
    c.anticommutator = 4.0 * g2c2 * params.gamma / (params.n * kerr2);
    c.jump = 8.0 * g2c2 * params.gamma / (params.n * kerr2);
    return c;
}

RateReport rate_report(const MediumParams& params, double pulse_length) {
    validate(params);
    RateReport r;
    r.u_elastic = kerr_coupling(params, &r.warnings);
    r.gamma_coll = collision_rate(params);
    const LossRates losses = loss_rates(params, pulse_length);
    r.gamma_loss_nl = losses.nonlinear;
    r.gamma_loss_lin = losses.linear;
    r.tau = derive_scales(params).tau();
    if (params.rho_dsp > 0.0) {
        const OdCriterion od = od_criterion(params, pulse_length);
        r.od_required = od.od_required;
        r.od_actual = od.od_actual;
        r.od_pass = od.pass;
        if (od.at_boundary)
            r.warnings.push_back("optical depth exactly at the threshold; verdict is fail");
    } else {
        r.od_actual = pulse_length / derive_scales(params).l_abs;
        r.warnings.push_back("rho_dsp = 0: no collisions, optical depth criterion cannot pass");
    }
    r.coll_faster_than_nl = r.gamma_coll > r.gamma_loss_nl;
    r.coll_faster_than_lin = r.gamma_coll > r.gamma_loss_lin;
    r.hierarchy_ok = r.coll_faster_than_nl && r.coll_faster_than_lin;
    return r;
}

} // namespace slp
