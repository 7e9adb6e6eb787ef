#pragma once

#include <array>
#include <string>
#include <vector>

#include "nldc/amplitude.hpp"
#include "nldc/integrate.hpp"
#include "nldc/kinematics.hpp"

namespace nldc {

/// Electron beam plus laser.
struct Setup {
    LaserConfig laser;
    double electron_energy = 1; ///< units of m

    DressedElectron initial() const { return dress(head_on_electron(electron_energy), laser); }
};

Setup make_setup(double electron_energy, double omega_eV, double xi);

/// Photon b energy and both photons' directions.
struct PhaseSpacePoint {
    double omega_b = 0; ///< units of m
    double theta_b = 0, psi_b = 0;
    double theta_c = 0, psi_c = 0;
};

struct Range {
    double lo = 0, hi = 0;
};

/// Defaults: omega_b in [1 keV, 1 MeV], theta_b and theta_c in (0, 1.5e-3) rad.
struct PhaseSpaceCuts {
    Range omega_b{1e3 / 510998.95, 1e6 / 510998.95};
    Range theta_b{0.0, 1.5e-3};
    Range theta_c{0.0, 1.5e-3};

    /// Throws std::invalid_argument for empty or unordered ranges.
    void validate() const;
};

/// Polarization selection: both labels 0 means summed over the four states.
struct PolarizationSelect {
    int lambda_b = 0, lambda_c = 0;
    static PolarizationSelect sum() { return {}; }
    bool summed() const { return lambda_b == 0; }
};

struct RateOptions {
    int n_min = 1;
    int n_max = 30;
    AmplitudeOptions amplitude;
};

/// Laboratory-frame rate density d W / d omega_b d Omega_b d Omega_c in
/// s^-1 sr^-2 MeV^-1.
struct RatePoint {
    double value = 0;
    int n_min = 1;
    std::vector<double> per_n;                 ///< selected polarization
    std::array<double, 4> per_polarization{};  ///< (1,1), (1,2), (2,1), (2,2), summed over n
    bool excluded = false;
    std::string reason;

    /// Contribution of the largest n, the truncation estimate.
    double tail_estimate() const { return per_n.empty() ? 0.0 : per_n.back(); }
};

/// One open laser-photon number at a phase-space point.
struct EmissionTerm {
    EmissionPoint point;
    AmplitudeSet amplitudes;
    /// Converts spin-summed |M|^2 to a rate density in s^-1 sr^-2 MeV^-1,
    /// including the 1/2 initial-spin average.
    double weight = 0;
};

/// Amplitudes for every open n in [n_min, n_max]. Propagates ResonanceError.
std::vector<EmissionTerm> emission_terms(const Setup& setup, const PhaseSpacePoint& x, const RateOptions& opts,
                                         AmplitudeEvaluator& evaluator);

/// Phase-space factor omega_b^2 omega_c^3 Q_f / (4 (2 pi)^5 q_f.k_c) / 2 in
/// natural units, times the conversion to s^-1 sr^-2 MeV^-1.
double phase_space_weight(const EmissionPoint& ep);

/// Resonant points come back excluded with value 0.
RatePoint differential_rate(const Setup& setup, const PhaseSpacePoint& x, PolarizationSelect pol,
                            const RateOptions& opts, AmplitudeEvaluator& evaluator);
RatePoint differential_rate(const Setup& setup, const PhaseSpacePoint& x, PolarizationSelect pol = {},
                            const RateOptions& opts = {});

/// Weak-field reference: n = 1 at xi' = scale * xi, rescaled by (xi/xi')^2.
struct PerturbativeOptions {
    double scale = 1e-3;
    bool richardson_check = true; ///< repeat at xi'/10 and require 0.5% agreement
};

class LimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Setup perturbative_setup(const Setup& setup, double scale);

RatePoint perturbative_rate(const Setup& setup, const PhaseSpacePoint& x, PolarizationSelect pol,
                            const RateOptions& opts, const PerturbativeOptions& popts,
                            AmplitudeEvaluator& evaluator);
RatePoint perturbative_rate(const Setup& setup, const PhaseSpacePoint& x, PolarizationSelect pol = {},
                            const RateOptions& opts = {}, const PerturbativeOptions& popts = {});

enum class RateMode { nonperturbative, perturbative };

struct IntegrationOptions {
    enum class Method { stratified, product_gauss } method = Method::stratified;
    int divisions = 4;            ///< strata per dimension
    int samples_per_stratum = 4;
    int max_rounds = 1;
    double rel_tolerance = 0;
    int gauss_order = 6;          ///< product_gauss nodes per dimension
    std::uint64_t seed = 1;
    Execution execution = Execution::parallel;
    int workers = 0;
};

struct IntegratedRate {
    IntegralEstimate estimate;  ///< value and error in the stated units
    long excluded = 0;          ///< resonant samples set to zero
};

/// dW/d theta_c = sin(theta_c) dW/d cos(theta_c) in s^-1 rad^-1: the
/// polarization-summed rate integrated over omega_b, theta_b, psi_b, psi_c.
IntegratedRate integrated_rate_theta_c(const Setup& setup, const PhaseSpaceCuts& cuts, double theta_c, RateMode mode,
                                       const RateOptions& opts, const IntegrationOptions& iopts);

/// Total rate in s^-1, also integrated over theta_c within the cuts.
IntegratedRate total_rate(const Setup& setup, const PhaseSpaceCuts& cuts, RateMode mode, const RateOptions& opts,
                          const IntegrationOptions& iopts);

struct SingleComptonOptions {
    int n_max = 40;
    int gauss_order = 16;     ///< per theta panel
    int psi_points = 48;      ///< periodic trapezoid in psi
    double psi_offset = 0.0;
    AmplitudeOptions amplitude;
};

struct SingleComptonResult {
    double total = 0;             ///< s^-1
    std::vector<double> per_n;    ///< s^-1, index n - 1
};

/// Total one-photon (nonlinear Compton) emission rate in s^-1.
SingleComptonResult single_compton_total_rate(const Setup& setup, const SingleComptonOptions& opts = {});

/// Spin-averaged d W / d Omega for harmonic n in natural units (m per sr).
double single_compton_dW_dOmega(const Setup& setup, int n, double theta, double psi, const AmplitudeOptions& opts = {});

/// W * N_electrons * duration, assuming perfect overlap.
double pairs_per_shot(double rate_per_second, double electrons, double duration_seconds);

} // namespace nldc
