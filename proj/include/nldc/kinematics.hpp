#pragma once

#include <optional>

#include "nldc/dirac.hpp"

namespace nldc {

/// Monochromatic plane wave A^mu = a^mu cos(kappa . x), propagating along -x^3
/// and linearly polarized along x^1.
struct LaserConfig {
    double omega = 0; ///< photon energy, units of m
    double xi = 0;    ///< intensity parameter |e| sqrt(|a^2|/2) / m
    FourVector a;     ///< (0, a^1, 0, 0)
    FourVector kappa; ///< omega (1, 0, 0, -1)

    /// e^2 a^2 (negative for a spacelike amplitude).
    double e2a2() const;
    double m_star_squared() const { return 1.0 + xi * xi; }
    double intensity_W_per_cm2() const;
};

LaserConfig laser_from_intensity(double omega_eV, double xi);

/// Recovers xi from the stored amplitude vector.
double intensity_parameter(const LaserConfig& laser);

/// Bare momentum p and quasimomentum q = p - kappa e^2 a^2 / (4 kappa.p).
struct DressedElectron {
    FourVector p;
    FourVector q;
    double m_star = 1;

    double Q() const { return q.t(); }
};

/// Throws std::invalid_argument unless kappa.p > 0.
DressedElectron dress(const FourVector& p, const LaserConfig& laser);
/// Inverse of dress: builds the bare momentum from a quasimomentum.
DressedElectron undress(const FourVector& q, const LaserConfig& laser);

/// On-shell electron (E, 0, 0, sqrt(E^2 - 1)) moving along +x^3.
FourVector head_on_electron(double energy);

/// Emitted photon with momentum omega (1, sin th cos ps, sin th sin ps, cos th)
/// and the two real transverse basis polarizations.
struct PhotonMode {
    double omega = 0, theta = 0, psi = 0;
    FourVector k;
    FourVector eps1, eps2;

    /// k / omega
    FourVector direction() const;
    const FourVector& basis(int lambda) const { return lambda == 1 ? eps1 : eps2; }
};

PhotonMode photon_mode(double omega, double theta, double psi);
/// Unit-energy null vector (1, n) for the given direction.
FourVector null_direction(double theta, double psi);

/// Full kinematic configuration for one laser-photon number n.
struct EmissionPoint {
    LaserConfig laser;
    DressedElectron initial;
    DressedElectron final;
    int n = 0;
    PhotonMode b, c;
};

/// Exact photon energy omega_c from energy-momentum conservation. Empty when
/// the channel is closed (non-positive numerator or denominator).
std::optional<double> solve_omega_c(int n, const DressedElectron& initial, const PhotonMode& mode_b,
                                    double theta_c, double psi_c, const LaserConfig& laser);

/// Small-angle approximation of omega_c valid for n omega/m << m/E ~ theta << 1.
double approx_omega_c(int n, const LaserConfig& laser, double electron_energy, double omega_b,
                      double theta_b, double theta_c);

/// Upper bound 4 n omega (E/m)^2 / (1 + xi^2) on omega_b + omega_c.
double frequency_sum_bound(int n, const LaserConfig& laser, double electron_energy);

/// Solves for omega_c and assembles the final electron. Empty for closed channels.
std::optional<EmissionPoint> make_emission_point(const LaserConfig& laser, const DressedElectron& initial,
                                                 int n, double omega_b, double theta_b, double psi_b,
                                                 double theta_c, double psi_c);
std::optional<EmissionPoint> make_emission_point(const LaserConfig& laser, double electron_energy, int n,
                                                 double omega_b, double theta_b, double psi_b,
                                                 double theta_c, double psi_c);

/// Signed off-shellness p^2 - m_*^2 of the intermediate p = q - k + s kappa,
/// evaluated without cancellation.
double propagator_offshell(const DressedElectron& initial, const FourVector& k, int s, const LaserConfig& laser);

/// min over both channels of |p_{b,c}^2 - m_*^2| (units of m^2) for the given s.
double resonance_distance(const EmissionPoint& ep, int s);

/// chi = xi p.kappa / m^2
double chi_parameter(const FourVector& p, const LaserConfig& laser);

/// Energy-delta Jacobian 1/|1 + dQ_f/d omega_c| = Q_f omega_c / (q_f . k_c).
double energy_jacobian(const EmissionPoint& ep);

/// (q_f)^2 - m_*^2 relative to m_*^2, for closure checks.
double closure_residual(const EmissionPoint& ep);

} // namespace nldc
