#pragma once

#include <string>
#include <vector>

#include "slp/medium.hpp"

namespace slp {

// Effective two-body Kerr coupling, J m^3. Negative (attractive) for delta_kerr > 0.
double kerr_coupling(const MediumParams& params, std::vector<std::string>* warnings = nullptr);

// Elastic collision rate (v_gr/L_abs)(gamma/|delta_kerr|)(rho_dsp/n), 1/s.
double collision_rate(const MediumParams& params);

struct LossRates {
    double nonlinear = 0.0;  // (v_gr/L_abs) [(gamma/|delta_kerr|)(rho_dsp/n)]^2
    double linear = 0.0;     // (v_gr/L_abs) (L_abs/L)^2
};

LossRates loss_rates(const MediumParams& params, double pulse_length);

struct OdCriterion {
    double od_actual = 0.0;    // L / L_abs
    double od_required = 0.0;  // sqrt((|delta_kerr|/gamma)(n/rho_dsp))
    bool pass = false;         // strict: od_actual > od_required
    bool at_boundary = false;  // od_actual == od_required
};

OdCriterion od_criterion(const MediumParams& params, double pulse_length);

// The four c-number prefactors of the polariton master equation, in order:
// elastic two-body, dispersive cubic-density shift, anticommutator loss, jump term.
// Units: elastic m^3/s, the others m^6/s.
struct MeanFieldCoefficients {
    double elastic = 0.0;         // g^2 cos^2 theta / delta_kerr
    double dispersive = 0.0;      // 4 g^2 Delta cos^2 theta / (n delta_kerr^2)
    double anticommutator = 0.0;  // 4 g^2 gamma cos^2 theta / (n delta_kerr^2)
    double jump = 0.0;            // 8 g^2 gamma cos^2 theta / (n delta_kerr^2)
};

MeanFieldCoefficients master_equation_coefficients(const MediumParams& params);

struct RateReport {
    double u_elastic = 0.0;
    double gamma_coll = 0.0;
    double gamma_loss_nl = 0.0;
    double gamma_loss_lin = 0.0;
    double tau = 0.0;
    double od_required = 0.0;
    double od_actual = 0.0;
    bool od_pass = false;
    bool coll_faster_than_nl = false;
    bool coll_faster_than_lin = false;
    bool hierarchy_ok = false;  // gamma_coll exceeds both loss rates
    std::vector<std::string> warnings;
};

RateReport rate_report(const MediumParams& params, double pulse_length);

} // namespace slp
