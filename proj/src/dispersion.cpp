#include "slp/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slp/constants.hpp"
#include "slp/errors.hpp"

namespace slp {

namespace {

constexpr double tie_tolerance = 1e-6;
constexpr double degeneracy_tolerance = 1e-9;

void normalize_phase(Vector5c& v) {
    v.normalize();
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const cplx pivot = v[imax];
    v *= std::conj(pivot) / std::abs(pivot);
    v[imax] = cplx(v[imax].real(), 0.0);
}

double sigma_weight(const Vector5c& v) {
    return std::norm(v[SigmaPlus]) + std::norm(v[SigmaMinus]);
}

double overlap(const Vector5c& a, const Vector5c& b) {
    return std::abs(a.dot(b));
}

double frequency_scale(const MediumParams& p) {
    return std::max({std::sqrt(p.omega_total_sq()), std::sqrt(p.g2n()), std::abs(p.delta_plus),
                     std::abs(p.delta_minus), p.gamma});
}

} // namespace

BlochMatrix build_bloch_matrix(const MediumParams& p, double k_z, double k_perp,
                               const BlochOptions& options) {
    derive_scales(p);
    BlochMatrix m;
    m.k_z = k_z;
    m.k_perp = k_perp;
    auto& M = m.entries;

    const double c = constants::c;
    const double coupling = std::sqrt(p.g2n());
    const double diffraction = c / (2.0 * p.k_p) * k_perp * k_perp;
    const double gamma = options.lossless ? 0.0 : p.gamma;

    M(EPlus, EPlus) = c * k_z + diffraction;
    M(EMinus, EMinus) = -c * k_z + diffraction;
    M(EPlus, SigmaPlus) = -coupling;
    M(EMinus, SigmaMinus) = -coupling;

    M(SigmaPlus, SigmaPlus) = cplx(p.delta_plus, -gamma);
    M(SigmaMinus, SigmaMinus) = cplx(p.delta_minus, -gamma);
    M(SigmaPlus, Spin) = -p.omega_plus;
    M(SigmaMinus, Spin) = -p.omega_minus;
    M(SigmaPlus, EPlus) = -coupling;
    M(SigmaMinus, EMinus) = -coupling;

    M(Spin, SigmaPlus) = -p.omega_plus;
    M(Spin, SigmaMinus) = -p.omega_minus;
    return m;
}

std::array<Eigenpair, 5> diagonalize(const BlochMatrix& m) {
    // Extended precision: slow-light parameters put ||M|| many decades above the dark-branch
    // frequencies that the curvature fit has to resolve.
    using Wide = Eigen::Matrix<std::complex<long double>, 5, 5>;
    Eigen::ComplexEigenSolver<Wide> solver(m.entries.cast<std::complex<long double>>(), true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("EigenSolverFailure", "complex eigensolver did not converge");

    std::array<Eigenpair, 5> pairs;
    for (int i = 0; i < 5; ++i) {
        pairs[i].omega = cplx(solver.eigenvalues()[i]);
        pairs[i].vector = solver.eigenvectors().col(i).cast<cplx>();
        normalize_phase(pairs[i].vector);
    }
    std::sort(pairs.begin(), pairs.end(), [](const Eigenpair& a, const Eigenpair& b) {
        if (a.omega.real() != b.omega.real())
            return a.omega.real() < b.omega.real();
        return a.omega.imag() < b.omega.imag();
    });
    return pairs;
}

std::vector<double> symmetric_grid(double k_max, std::size_t points) {
    if (points < 3 || points % 2 == 0)
        throw DomainError("symmetric grid needs an odd number of points >= 3");
    if (!(k_max > 0.0))
        throw DomainError("grid extent must be positive");
    std::vector<double> grid(points);
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(points / 2);
    for (std::ptrdiff_t i = -half; i <= half; ++i)
        grid[static_cast<std::size_t>(i + half)] = k_max * static_cast<double>(i) / static_cast<double>(half);
    return grid;
}

BandStructure band_structure(const MediumParams& params, const std::vector<double>& k_grid,
                             double k_perp, const BlochOptions& options) {
    if (k_grid.empty())
        throw DomainError("empty k grid");
    if (!std::is_sorted(k_grid.begin(), k_grid.end()))
        throw DomainError("k grid must be sorted");
    const auto zero = std::find(k_grid.begin(), k_grid.end(), 0.0);
    if (zero == k_grid.end())
        throw DomainError("k grid must contain k = 0");
    const std::size_t origin = static_cast<std::size_t>(zero - k_grid.begin());
    const std::size_t nk = k_grid.size();

    std::vector<std::array<Eigenpair, 5>> spectra(nk);
    for (std::size_t i = 0; i < nk; ++i)
        spectra[i] = diagonalize(build_bloch_matrix(params, k_grid[i], k_perp, options));

    BandStructure band;
    band.k_grid = k_grid;
    band.k_perp = k_perp;
    for (auto& b : band.branches) {
        b.omega.resize(nk);
        b.vectors.resize(nk);
    }

    // Dark state at the origin: omega = 0 with no excited-state admixture.
    const double scale = frequency_scale(params);
    const double kinetic = constants::c / (2.0 * params.k_p) * k_perp * k_perp;
    std::vector<std::size_t> dark_candidates;
    for (std::size_t j = 0; j < 5; ++j) {
        const auto& pair = spectra[origin][j];
        const bool zero_energy = std::abs(pair.omega) <= 1e-8 * scale + 2.0 * kinetic;
        if (zero_energy && sigma_weight(pair.vector) < 1e-8 + kinetic / scale)
            dark_candidates.push_back(j);
    }
    if (dark_candidates.size() != 1) {
        std::ostringstream msg;
        msg << "expected exactly one dark state at k = 0, found " << dark_candidates.size();
        throw DegenerateBranch(msg.str());
    }
    band.dark_index = dark_candidates.front();

    // Degenerate pairs at the origin (parity partners when Omega_+ = Omega_-) come back as
    // arbitrary mixtures. Replace them by the k -> 0+ limit, the vectors that continue
    // analytically through the crossing.
    bool degenerate = false;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j)
            degenerate = degenerate || std::abs(spectra[origin][i].omega - spectra[origin][j].omega) <=
                                           degeneracy_tolerance * scale;
    if (degenerate) {
        const double nudge = 1e-6 * scale / constants::c;
        const auto limit = diagonalize(build_bloch_matrix(params, nudge, k_perp, options));
        for (std::size_t j = 0; j < 5; ++j)
            if (j != band.dark_index)
                spectra[origin][j].vector = limit[j].vector;
    }

    int other = 1;
    for (std::size_t j = 0; j < 5; ++j) {
        auto& b = band.branches[j];
        b.dark = j == band.dark_index;
        b.label = b.dark ? "dark" : "other" + std::to_string(other++);
        b.omega[origin] = spectra[origin][j].omega;
        b.vectors[origin] = spectra[origin][j].vector;
    }

    // Assignment maximising the summed overlap over all 5! permutations; greedy matching
    // breaks down where two branches pass close to the same eigenvector.
    auto track = [&](std::size_t from, std::size_t to) {
        std::array<std::array<double, 5>, 5> o{};
        for (std::size_t b = 0; b < 5; ++b)
            for (std::size_t j = 0; j < 5; ++j)
                o[b][j] = overlap(band.branches[b].vectors[from], spectra[to][j].vector);
        std::array<std::size_t, 5> perm{0, 1, 2, 3, 4}, assigned = perm;
        double best = -1.0, second = -1.0;
        do {
            double total = 0.0;
            for (std::size_t b = 0; b < 5; ++b)
                total += o[b][perm[b]];
            if (total > best) {
                second = best;
                best = total;
                assigned = perm;
            } else if (total > second) {
                second = total;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (best - second <= tie_tolerance) {
            std::ostringstream msg;
            msg << "ambiguous branch continuation at k = " << k_grid[to] << " (summed overlaps "
                << best << " vs " << second << ")";
            throw DegenerateBranch(msg.str());
        }
        for (std::size_t b = 0; b < 5; ++b) {
            band.min_overlap = std::min(band.min_overlap, o[b][assigned[b]]);
            band.branches[b].omega[to] = spectra[to][assigned[b]].omega;
            band.branches[b].vectors[to] = spectra[to][assigned[b]].vector;
        }
    };

    for (std::size_t i = origin + 1; i < nk; ++i)
        track(i - 1, i);
    for (std::size_t i = origin; i-- > 0;)
        track(i + 1, i);
    return band;
}

CurvatureFit extract_mass(const std::vector<double>& k, const std::vector<cplx>& omega,
                          double window_k_max, double max_residual) {
    if (k.size() != omega.size())
        throw DomainError("k and omega sizes differ");
    std::vector<double> ks;
    std::vector<cplx> ws;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (std::abs(k[i]) <= window_k_max) {
            ks.push_back(k[i]);
            ws.push_back(omega[i]);
        }
    }
    if (ks.size() < 7)
        throw DomainError("curvature fit needs at least 7 k-points in the window");

    // Columns scaled by the window so the normal equations stay well conditioned.
    const Eigen::Index rows = static_cast<Eigen::Index>(ks.size());
    Eigen::MatrixXcd design(rows, 2);
    Eigen::VectorXcd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double x = ks[static_cast<std::size_t>(i)] / window_k_max;
        design(i, 0) = x;
        design(i, 1) = x * x;
        rhs[i] = ws[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXcd coef = design.colPivHouseholderQr().solve(rhs);

    CurvatureFit fit;
    fit.linear = coef[0] / window_k_max;
    fit.curvature = coef[1] / (window_k_max * window_k_max);
    fit.m_par = constants::hbar / (2.0 * fit.curvature);
    fit.k_max = window_k_max;
    fit.points = ks.size();
    const double norm = rhs.norm();
    fit.relative_residual = norm > 0.0 ? (design * coef - rhs).norm() / norm : 0.0;
    if (!(fit.relative_residual <= max_residual)) {
        std::ostringstream msg;
        msg << "relative fit residual " << fit.relative_residual << " exceeds " << max_residual
            << " (k window too wide)";
        throw FitResidualTooLarge(msg.str());
    }
    return fit;
}

CurvatureFit extract_mass(const BandStructure& band, double window_k_max, double max_residual) {
    return extract_mass(band.k_grid, band.dark().omega, window_k_max, max_residual);
}

CurvatureFit fit_dark_curvature(const MediumParams& params, const BlochOptions& options,
                                double initial_window, std::size_t points) {
    const double l_abs = derive_scales(params).l_abs;
    double window = initial_window;
    for (int attempt = 0; attempt < 6; ++attempt, window *= 0.1) {
        const double k_max = window / l_abs;
        const BandStructure band = band_structure(params, symmetric_grid(k_max, points), 0.0, options);
        try {
            return extract_mass(band, k_max);
        } catch (const FitResidualTooLarge&) {
            if (attempt == 5)
                throw;
        }
    }
    throw FitResidualTooLarge("unreachable");
}

cplx analytic_curvature(const MediumParams& params, const BlochOptions& options) {
    const DerivedScales s = derive_scales(params);
    const double cos2 = std::cos(s.theta) * std::cos(s.theta);
    const double gamma = options.lossless ? 0.0 : params.gamma;
    return constants::c * constants::c * cos2 * cplx(params.delta(), -gamma) / params.g2n();
}

double transverse_curvature(const MediumParams& params, const BlochOptions& options) {
    const double scale = frequency_scale(params);
    const Vector5c dark0 = [&] {
        const auto pairs = diagonalize(build_bloch_matrix(params, 0.0, 0.0, options));
        std::size_t best = 0;
        for (std::size_t j = 1; j < 5; ++j)
            if (std::abs(pairs[j].omega) < std::abs(pairs[best].omega))
                best = j;
        return pairs[best].vector;
    }();

    // u = k_perp^2 chosen so the diffraction shift is 1e-5 of the spectral scale.
    const double u0 = 1e-5 * scale * 2.0 * params.k_p / constants::c;
    constexpr int samples = 6;
    Eigen::MatrixXd design(samples, 3);
    Eigen::VectorXd rhs(samples);
    for (int j = 0; j < samples; ++j) {
        const double u = u0 * (j + 1);
        const auto pairs = diagonalize(build_bloch_matrix(params, 0.0, std::sqrt(u), options));
        std::size_t best = 0;
        for (std::size_t i = 1; i < 5; ++i)
            if (overlap(dark0, pairs[i].vector) > overlap(dark0, pairs[best].vector))
                best = i;
        design(j, 0) = 1.0;
        design(j, 1) = (j + 1);
        design(j, 2) = (j + 1) * (j + 1);
        rhs[j] = pairs[best].omega.real() / u;
    }
    return design.colPivHouseholderQr().solve(rhs)[0];
}

} // namespace slp
