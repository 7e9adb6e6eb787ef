#include "nldc/kinematics.hpp"

#include <cmath>
#include <stdexcept>

#include "nldc/units.hpp"

namespace nldc {

double LaserConfig::e2a2() const
{
    return units::electron_charge * units::electron_charge * minkowski_dot(a, a);
}

double LaserConfig::intensity_W_per_cm2() const
{
    // Peak field E0 = xi m c omega / |e| in SI; cycle-averaged I = c eps0 E0^2 / 2.
    const double omega_eV = units::natural_to_eV(omega);
    const double wavenumber = omega_eV / (units::hbar_eVs * units::speed_of_light); // 1/m
    const double e0 = xi * units::electron_mass_eV * wavenumber;                    // V/m
    const double intensity = 0.5 * units::speed_of_light * units::vacuum_permittivity * e0 * e0;
    return intensity * 1e-4;
}

LaserConfig laser_from_intensity(double omega_eV, double xi)
{
    if (!(omega_eV > 0)) throw std::invalid_argument("laser_from_intensity: photon energy must be positive");
    if (!(xi >= 0)) throw std::invalid_argument("laser_from_intensity: xi must be non-negative");
    LaserConfig laser;
    laser.omega = units::eV_to_natural(omega_eV);
    laser.xi = xi;
    const double a1 = std::sqrt(2.0) * xi / std::abs(units::electron_charge);
    laser.a = FourVector::from_txyz(0, a1, 0, 0);
    laser.kappa = FourVector::light_cone(0, 2.0 * laser.omega, 0, 0);
    return laser;
}

double intensity_parameter(const LaserConfig& laser)
{
    return std::abs(units::electron_charge) * std::sqrt(std::abs(minkowski_dot(laser.a, laser.a)) / 2.0);
}

DressedElectron dress(const FourVector& p, const LaserConfig& laser)
{
    const double kp = minkowski_dot(laser.kappa, p);
    if (!(kp > 0)) throw std::invalid_argument("dress: requires kappa.p > 0 (counter-propagating electron)");
    DressedElectron d;
    d.p = p;
    d.q = p - laser.kappa * (laser.e2a2() / (4.0 * kp));
    d.m_star = std::sqrt(laser.m_star_squared());
    return d;
}

DressedElectron undress(const FourVector& q, const LaserConfig& laser)
{
    const double kq = minkowski_dot(laser.kappa, q);
    if (!(kq > 0)) throw std::invalid_argument("undress: requires kappa.q > 0");
    DressedElectron d;
    d.q = q;
    d.p = q + laser.kappa * (laser.e2a2() / (4.0 * kq));
    d.m_star = std::sqrt(laser.m_star_squared());
    return d;
}

FourVector head_on_electron(double energy)
{
    if (!(energy >= 1.0)) throw std::invalid_argument("head_on_electron: energy below rest mass");
    const double pz = std::sqrt((energy - 1.0) * (energy + 1.0));
    return FourVector::light_cone(energy + pz, 1.0 / (energy + pz), 0, 0);
}

FourVector null_direction(double theta, double psi)
{
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    const double st = std::sin(theta);
    return FourVector::light_cone(2.0 * c * c, 2.0 * s * s, st * std::cos(psi), st * std::sin(psi));
}

FourVector PhotonMode::direction() const { return null_direction(theta, psi); }

PhotonMode photon_mode(double omega, double theta, double psi)
{
    if (!(omega > 0)) throw std::invalid_argument("photon_mode: omega must be positive");
    PhotonMode m;
    m.omega = omega;
    m.theta = theta;
    m.psi = psi;
    m.k = null_direction(theta, psi) * omega;
    const double ct = std::cos(theta), st = std::sin(theta), cp = std::cos(psi), sp = std::sin(psi);
    m.eps1 = FourVector::from_txyz(0, ct * cp, ct * sp, -st);
    m.eps2 = FourVector::from_txyz(0, -sp, cp, 0);
    return m;
}

std::optional<double> solve_omega_c(int n, const DressedElectron& initial, const PhotonMode& mode_b,
                                    double theta_c, double psi_c, const LaserConfig& laser)
{
    const FourVector& q = initial.q;
    const FourVector& kb = mode_b.k;
    const FourVector c_hat = null_direction(theta_c, psi_c);
    const double numerator = n * minkowski_dot(laser.kappa, q) - minkowski_dot(kb, q)
                             - n * minkowski_dot(laser.kappa, kb);
    const double denominator = n * minkowski_dot(laser.kappa, c_hat) + minkowski_dot(q, c_hat)
                               - minkowski_dot(kb, c_hat);
    if (!(numerator > 0) || !(denominator > 0)) return std::nullopt;
    return numerator / denominator;
}

double approx_omega_c(int n, const LaserConfig& laser, double electron_energy, double omega_b,
                      double theta_b, double theta_c)
{
    const double e = electron_energy;
    const double ms2 = laser.m_star_squared();
    return (4.0 * n * laser.omega * e - omega_b * (theta_b * theta_b * e + ms2 / e))
           / (theta_c * theta_c * e + ms2 / e);
}

double frequency_sum_bound(int n, const LaserConfig& laser, double electron_energy)
{
    return 4.0 * n * laser.omega * electron_energy * electron_energy / laser.m_star_squared();
}

std::optional<EmissionPoint> make_emission_point(const LaserConfig& laser, const DressedElectron& initial,
                                                 int n, double omega_b, double theta_b, double psi_b,
                                                 double theta_c, double psi_c)
{
    EmissionPoint ep;
    ep.laser = laser;
    ep.initial = initial;
    ep.n = n;
    ep.b = photon_mode(omega_b, theta_b, psi_b);
    const auto omega_c = solve_omega_c(n, initial, ep.b, theta_c, psi_c, laser);
    if (!omega_c) return std::nullopt;
    ep.c = photon_mode(*omega_c, theta_c, psi_c);
    FourVector qf = initial.q + laser.kappa * double(n) - ep.b.k - ep.c.k;
    if (!(qf.plus > 0) || !(qf.minus > 0)) return std::nullopt;
    // Re-impose the mass shell on the small light-cone component; the
    // correction is at rounding level for an accepted solution.
    qf.minus = (laser.m_star_squared() + qf.x * qf.x + qf.y * qf.y) / qf.plus;
    ep.final = undress(qf, laser);
    return ep;
}

std::optional<EmissionPoint> make_emission_point(const LaserConfig& laser, double electron_energy, int n,
                                                 double omega_b, double theta_b, double psi_b,
                                                 double theta_c, double psi_c)
{
    return make_emission_point(laser, dress(head_on_electron(electron_energy), laser), n, omega_b, theta_b,
                               psi_b, theta_c, psi_c);
}

double propagator_offshell(const DressedElectron& initial, const FourVector& k, int s, const LaserConfig& laser)
{
    // (q - k + s kappa)^2 - m_*^2 with q^2 = m_*^2 and k^2 = kappa^2 = 0.
    return -2.0 * minkowski_dot(initial.q, k) + 2.0 * s * minkowski_dot(laser.kappa, initial.q - k);
}

double resonance_distance(const EmissionPoint& ep, int s)
{
    const double db = propagator_offshell(ep.initial, ep.b.k, s, ep.laser);
    const double dc = propagator_offshell(ep.initial, ep.c.k, s, ep.laser);
    return std::min(std::abs(db), std::abs(dc));
}

double chi_parameter(const FourVector& p, const LaserConfig& laser)
{
    return laser.xi * minkowski_dot(p, laser.kappa);
}

double energy_jacobian(const EmissionPoint& ep)
{
    return ep.final.Q() * ep.c.omega / minkowski_dot(ep.final.q, ep.c.k);
}

double closure_residual(const EmissionPoint& ep)
{
    const FourVector qf = ep.initial.q + ep.laser.kappa * double(ep.n) - ep.b.k - ep.c.k;
    const double ms2 = ep.laser.m_star_squared();
    return (minkowski_dot(qf, qf) - ms2) / ms2;
}

} // namespace nldc
