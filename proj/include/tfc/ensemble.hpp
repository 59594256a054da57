#pragma once

// Enantiomeric-excess signal of a molecular ensemble and a shot-noise
// estimate of the smallest detectable excess. All noise figures are
// order-of-magnitude estimates built from standard photon-counting relations.

#include <span>

#include "tfc/spectrum.hpp"

namespace tfc {

struct EnsembleSpec
{
    double N_R = 0.0;
    double N_S = 0.0;
    double beam_area = 1.0e-4; ///< m^2
    double t_star = 0.0;       ///< averaging time (a.u.)
};

struct EnsembleSignal
{
    double power = 0.0; ///< omega1 omega2 C_L^R (N_R - N_S) / (2 pi), a.u.
    double ee = 0.0;    ///< |N_R - N_S|
    int chirality = 0;  ///< sgn(N_R - N_S)
};

EnsembleSignal ensemble_pumping(const EnsembleSpec& spec, int C_L_R, const DriveParams& drive);

/// Molecules in 1 mL of a 1 micromolar solution.
double reference_sample_molecules();

struct ShotNoiseEstimate
{
    double intensity = 0.0;            ///< eps0 c E^2 / 2 of the E21 field (a.u.)
    double photon_count = 0.0;         ///< I A t* / Omega
    double noise = 0.0;                ///< sqrt(photon_count)
    double per_molecule_photons = 0.0; ///< min over lines of |P t* / Omega_line|
    double threshold = 0.0;            ///< noise / per_molecule_photons (molecules)
    double ee_limit_percent = 0.0;     ///< threshold relative to the reference sample, in %

    bool detectable(double excess) const noexcept { return std::abs(excess) >= threshold; }
};

/// Photons are counted from the E21 field at carrier frequency carrier_omega.
/// Throws InvalidParameters when the field, area or time vanish.
ShotNoiseEstimate shot_noise_limit(const EnsembleSpec& spec, const DriveParams& drive, double carrier_omega,
                                   std::span<const SidebandLine> lines);

} // namespace tfc
