#pragma once

// Lab-frame sideband spectrum recovered from rotating-frame coherences by
// demodulation, the Chern extraction from photon-rate combinations, and the
// R - S difference spectrum.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "tfc/dynamics.hpp"

namespace tfc {

struct SidebandLine
{
    LineSpec spec;
    double frequency = 0.0;   ///< Omega_ij + sign * omega_mode (a.u.)
    double photon_rate = 0.0; ///< average photons per unit time absorbed from the line
    double power = 0.0;       ///< frequency * photon_rate (a.u. power, per molecule)

    std::string carrier() const { return carrier_label(spec.carrier); }
    std::string sideband() const { return sideband_label(spec); }
};

struct SidebandSpectrum
{
    Enantiomer enantiomer = Enantiomer::R;
    std::vector<SidebandLine> lines; ///< in kSidebandLines order
    double window_periods = 0.0;
    std::vector<std::string> warnings;
};

double line_frequency(const LineSpec& line, const SimConfig& cfg);

/// Demodulated sideband powers over [0, window]; the window must be at least
/// 144 omega2 periods.
SidebandSpectrum sideband_powers(const Trajectory& traj, const SimConfig& cfg, Enantiomer e, double window_periods);

struct SpectralChern
{
    double q1 = 0.0; ///< 2 pi P(omega1) / (omega1 omega2)
    double q2 = 0.0; ///< 2 pi P(omega2) / (omega1 omega2)
    /// (q2 - q1) / 2, directly comparable with PumpingReport::q.
    double q21() const noexcept { return 0.5 * (q2 - q1); }
};

SpectralChern chern_from_spectrum(std::span<const SidebandLine> lines, const DriveParams& drive);

struct DifferenceRow
{
    LineSpec spec;
    double frequency = 0.0;
    double P_R = 0.0;
    double P_S = 0.0;
    double diff = 0.0;
};

/// Frequency-aligned merge of an R and an S spectrum computed under the same drive.
std::vector<DifferenceRow> difference_spectrum(std::span<const SidebandLine> lines_R,
                                               std::span<const SidebandLine> lines_S);

/// Per-molecule power in a.u. expressed as an intensity through the given
/// beam area (default 1 cm^2).
double power_to_intensity_si(double power_au, double beam_area_m2 = 1.0e-4);

} // namespace tfc
