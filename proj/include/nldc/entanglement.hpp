#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nldc/rates.hpp"

namespace nldc {

/// Two-photon polarization state in the basis |11>, |12>, |21>, |22> of
/// (lambda_b, lambda_c).
struct PolarizationDensityMatrix {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();

    static constexpr int index(int lb, int lc) { return (lb - 1) * 2 + (lc - 1); }
    double trace() const { return rho.trace().real(); }
    double hermiticity_defect() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const;
};

/// Unnormalized (1/2) sum over spins S(lb,lc) S*(lb',lc') of one n.
Eigen::Matrix4cd spin_summed_outer(const AmplitudeSet& amps);

/// Single n channel, normalized to unit trace.
PolarizationDensityMatrix density_matrix(const EmissionTerm& term);

/// Incoherent sum over the open channels weighted by their rate, normalized.
/// Throws std::domain_error when no channel carries weight.
PolarizationDensityMatrix density_matrix(const std::vector<EmissionTerm>& terms);

enum class NPolicy { incoherent_sum, per_n };

struct DensityResult {
    PolarizationDensityMatrix combined;              ///< incoherent sum
    std::vector<int> n;                              ///< per-n mode only
    std::vector<PolarizationDensityMatrix> per_n;
    double rate = 0;                                 ///< polarization-summed, s^-1 sr^-2 MeV^-1
};

/// Evaluates the channels at x. Propagates ResonanceError and throws
/// std::domain_error if every channel is closed.
DensityResult density_matrix(const Setup& setup, const PhaseSpacePoint& x, NPolicy policy, const RateOptions& opts,
                             AmplitudeEvaluator& evaluator);

struct ConcurrenceResult {
    double C = 0;
    std::array<double, 4> zeta{}; ///< eigenvalues of rho (sy x sy) rho* (sy x sy), descending
};

/// Wootters concurrence. Throws std::invalid_argument for inputs that are not
/// Hermitian (1e-12 relative to the largest entry), not positive
/// semidefinite (eigenvalue below -1e-10) or not of unit trace (1e-10).
ConcurrenceResult concurrence(const PolarizationDensityMatrix& rho);

struct MapCell {
    double axis1 = 0, axis2 = 0;
    double concurrence = 0;
    double rate = 0;           ///< polarization-summed rate density
    bool masked = false;
    std::string reason;
};

/// Concurrence plus the polarization-summed rate at each point. Failures at a
/// point are recorded in the cell. Perturbative mode evaluates the weak-field
/// n = 1 channel and rescales the rate.
std::vector<MapCell> concurrence_map(const Setup& setup, const std::vector<PhaseSpacePoint>& points, RateMode mode,
                                     const RateOptions& opts, Execution execution = Execution::parallel,
                                     int workers = 0, double perturbative_scale = 1e-3);

} // namespace nldc
