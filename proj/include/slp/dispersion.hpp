#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slp/medium.hpp"

namespace slp {

using cplx = std::complex<double>;
using Vector5c = Eigen::Matrix<cplx, 5, 1>;
using Matrix5c = Eigen::Matrix<cplx, 5, 5>;

// Amplitude order of the plane-wave vector.
enum Component : int { EPlus = 0, EMinus = 1, SigmaPlus = 2, SigmaMinus = 3, Spin = 4 };

inline constexpr std::array<const char*, 5> component_names{"E_plus", "E_minus", "sigma_plus",
                                                            "sigma_minus", "S"};

// omega v = M v for the plane-wave ansatz exp(i k_z z + i k_perp x - i omega t).
struct BlochMatrix {
    double k_z = 0.0;
    double k_perp = 0.0;
    Matrix5c entries = Matrix5c::Zero();
};

struct BlochOptions {
    // Drop gamma from M (real spectrum); length units still use the physical gamma.
    bool lossless = false;
};

BlochMatrix build_bloch_matrix(const MediumParams& params, double k_z, double k_perp,
                               const BlochOptions& options = {});

struct Eigenpair {
    cplx omega;
    Vector5c vector;  // unit norm, largest-magnitude component real positive
};

// Eigenpairs sorted by ascending Re(omega).
std::array<Eigenpair, 5> diagonalize(const BlochMatrix& m);

struct Branch {
    std::string label;
    bool dark = false;
    std::vector<cplx> omega;         // one per k_grid entry
    std::vector<Vector5c> vectors;
};

struct BandStructure {
    std::vector<double> k_grid;
    double k_perp = 0.0;
    std::array<Branch, 5> branches;
    std::size_t dark_index = 0;
    double min_overlap = 1.0;        // smallest adjacent-k overlap accepted by the tracker

    const Branch& dark() const { return branches[dark_index]; }
};

// Tracks the five branches outward from k = 0 by eigenvector overlap.
// k_grid must be sorted and contain 0. Throws DegenerateBranch on ambiguous tracking.
BandStructure band_structure(const MediumParams& params, const std::vector<double>& k_grid,
                             double k_perp = 0.0, const BlochOptions& options = {});

// Odd-sized uniform grid over [-k_max, k_max], including k = 0.
std::vector<double> symmetric_grid(double k_max, std::size_t points);

struct CurvatureFit {
    cplx curvature;        // C in omega = b k + C k^2, m^2/s
    cplx linear;           // b, m/s
    cplx m_par;            // hbar / (2 C), kg
    double relative_residual = 0.0;
    double k_max = 0.0;
    std::size_t points = 0;
};

// Least-squares fit omega(k) = b k + C k^2 through the origin over |k| <= window_k_max.
// Requires >= 7 points in the window; throws FitResidualTooLarge above max_residual.
CurvatureFit extract_mass(const std::vector<double>& k, const std::vector<cplx>& omega,
                          double window_k_max, double max_residual = 1e-6);

CurvatureFit extract_mass(const BandStructure& band, double window_k_max,
                          double max_residual = 1e-6);

// Fits the dark branch on a dedicated fine grid. Starts at |k| L_abs <= initial_window and
// shrinks the window tenfold until the residual criterion is met.
CurvatureFit fit_dark_curvature(const MediumParams& params, const BlochOptions& options = {},
                                double initial_window = 0.01, std::size_t points = 21);

// Closed-form longitudinal curvature c^2 cos^2 theta (Delta - i gamma) / (g^2 n).
cplx analytic_curvature(const MediumParams& params, const BlochOptions& options = {});

// d omega / d(k_perp^2) of the dark branch at k_z = 0, Richardson-extrapolated to k_perp -> 0.
double transverse_curvature(const MediumParams& params, const BlochOptions& options = {});

} // namespace slp
