#pragma once

// Atomic units (hbar = e = m_e = 1) and the SI conversions used for reporting.

#include <numbers>

namespace tfc::units {

inline constexpr double hbar = 1.0;
inline constexpr double pi = std::numbers::pi;

/// 1 a.u. of angular frequency in rad/s.
inline constexpr double angular_frequency_si = 4.134137333518e16;
/// 1 a.u. of time in seconds.
inline constexpr double time_si = 2.4188843265857e-17;
/// 1 a.u. of energy (hartree) in joules.
inline constexpr double energy_si = 4.3597447222071e-18;
/// 1 a.u. of power in watts.
inline constexpr double power_si = energy_si / time_si;
/// 1 bohr in metres.
inline constexpr double length_si = 5.29177210903e-11;
/// Speed of light in a.u. (inverse fine-structure constant).
inline constexpr double speed_of_light = 137.035999084;
/// Vacuum permittivity in a.u.
inline constexpr double epsilon0 = 1.0 / (4.0 * pi);
inline constexpr double avogadro = 6.02214076e23;

/// Display helper: a.u. angular frequency to MHz (cycles per second).
constexpr double to_mhz(double omega_au)
{
    return omega_au * angular_frequency_si / (2.0 * pi * 1.0e6);
}

constexpr double area_si_to_au(double square_metres)
{
    return square_metres / (length_si * length_si);
}

} // namespace tfc::units
