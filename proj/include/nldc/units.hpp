#pragma once

// Internal unit system: hbar = c = 1 and the electron mass m = 1. Energies and
// momenta are in units of m, rates in units of m/hbar.

namespace nldc::units {

inline constexpr double electron_mass_eV = 510998.95;
inline constexpr double hbar_eVs = 6.582119569e-16;
inline constexpr double fine_structure = 0.0072973525693;
inline constexpr double speed_of_light = 299792458.0;      // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double pi = 3.14159265358979323846;

// e = -sqrt(4 pi alpha) in Heaviside-Lorentz units with epsilon_0 = 1.
inline constexpr double electron_charge = -0.30282212087208876;

inline constexpr double eV_to_natural(double eV) { return eV / electron_mass_eV; }
inline constexpr double natural_to_eV(double e) { return e * electron_mass_eV; }
inline constexpr double MeV_to_natural(double MeV) { return MeV * 1e6 / electron_mass_eV; }
inline constexpr double natural_to_MeV(double e) { return e * electron_mass_eV * 1e-6; }

/// One natural rate unit (m c^2 / hbar) expressed in s^-1.
inline constexpr double rate_unit_per_second = electron_mass_eV / hbar_eVs;

inline constexpr double rate_to_per_second(double r) { return r * rate_unit_per_second; }
inline constexpr double per_second_to_rate(double r) { return r / rate_unit_per_second; }

/// Converts a rate density per unit energy (natural) to s^-1 MeV^-1.
inline constexpr double rate_density_to_per_second_MeV(double r)
{
    return r * rate_unit_per_second / (electron_mass_eV * 1e-6);
}

} // namespace nldc::units
