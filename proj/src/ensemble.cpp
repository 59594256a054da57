#include "tfc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tfc/errors.hpp"
#include "tfc/units.hpp"

namespace tfc {

EnsembleSignal ensemble_pumping(const EnsembleSpec& spec, int C_L_R, const DriveParams& drive)
{
    if (spec.N_R < 0.0 || spec.N_S < 0.0)
        throw InvalidParameters("molecule counts must be non-negative");
    const double excess = spec.N_R - spec.N_S;
    EnsembleSignal s;
    s.power = drive.omega1 * drive.omega2 * C_L_R / (2.0 * std::numbers::pi) * excess;
    s.ee = std::abs(excess);
    s.chirality = excess > 0.0 ? 1 : (excess < 0.0 ? -1 : 0);
    return s;
}

double reference_sample_molecules()
{
    constexpr double litres = 1.0e-3;
    constexpr double molar = 1.0e-6;
    return litres * molar * units::avogadro;
}

ShotNoiseEstimate shot_noise_limit(const EnsembleSpec& spec, const DriveParams& drive, double carrier_omega,
                                   std::span<const SidebandLine> lines)
{
    if (!(drive.E21 > 0.0))
        throw InvalidParameters("shot noise is undefined without a field");
    if (!(spec.beam_area > 0.0) || !(spec.t_star > 0.0))
        throw InvalidParameters("beam area and averaging time must be positive");
    if (!(carrier_omega > 0.0))
        throw InvalidParameters("carrier frequency must be positive");
    if (lines.empty())
        throw InvalidParameters("shot-noise threshold needs the sideband lines");

    ShotNoiseEstimate est;
    est.intensity = units::epsilon0 * units::speed_of_light * drive.E21 * drive.E21 / 2.0;
    const double area = units::area_si_to_au(spec.beam_area);
    est.photon_count = est.intensity * area * spec.t_star / carrier_omega;
    est.noise = std::sqrt(est.photon_count);

    double per = std::numeric_limits<double>::infinity();
    for (const SidebandLine& l : lines)
        per = std::min(per, std::abs(l.power * spec.t_star / l.frequency));
    est.per_molecule_photons = per;
    est.threshold = per > 0.0 ? est.noise / per : std::numeric_limits<double>::infinity();
    est.ee_limit_percent = 100.0 * est.threshold / reference_sample_molecules();
    return est;
}

} // namespace tfc
