#include "tfc/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tfc/errors.hpp"
#include "tfc/units.hpp"

namespace tfc {

namespace {

using namespace std::complex_literals;

constexpr double kMinWindowPeriods = 144.0;

bool same_line(const LineSpec& a, const LineSpec& b)
{
    return a.carrier == b.carrier && a.mode == b.mode && a.sign == b.sign;
}

std::string line_name(const LineSpec& l) { return carrier_label(l.carrier) + sideband_label(l); }

} // namespace

double line_frequency(const LineSpec& line, const SimConfig& cfg)
{
    const DriveParams& d = cfg.drive;
    double carrier = 0.0;
    switch (line.carrier) {
    case Carrier::c21: carrier = d.Omega21(cfg.molecule); break;
    case Carrier::c32: carrier = d.Omega32(cfg.molecule); break;
    case Carrier::c31: carrier = d.Omega31(cfg.molecule); break;
    }
    const double w = line.mode == 1 ? d.omega1 : d.omega2;
    return carrier + line.sign * w;
}

SidebandSpectrum sideband_powers(const Trajectory& traj, const SimConfig& cfg, Enantiomer e, double window_periods)
{
    if (traj.enantiomer != e)
        throw InvalidParameters("trajectory belongs to the other enantiomer");
    if (window_periods < kMinWindowPeriods)
        throw InvalidParameters("sideband demodulation needs a window of at least 144 omega2 periods");
    const double period = cfg.omega2_period();
    const double target = traj.acc_origin + window_periods * period;
    if (traj.samples.empty() || traj.samples.back().t < target * (1.0 - 1.0e-12))
        throw InvalidParameters("trajectory does not cover the demodulation window");

    const TrajectorySample& s = traj.nearest(target);
    const double T = s.t - traj.acc_origin;

    SidebandSpectrum out;
    out.enantiomer = e;
    out.window_periods = T / period;
    if (!is_fibonacci(std::round(out.window_periods)) ||
        std::abs(out.window_periods - std::round(out.window_periods)) > 1.0e-6) {
        std::ostringstream os;
        os << "demodulation window of " << out.window_periods
           << " periods is not a Fibonacci number; quasiperiodic leakage is not suppressed";
        out.warnings.push_back(os.str());
    }

    const DipoleTable mu = dipole_matrix_elements(cfg.molecule, e);
    // Lab coupling factor g per carrier: H_line = g c exp(-i Omega_line t) |a><b| + h.c.
    const cplx g21 = -1i * mu.mu_21 / 2.0;
    const cplx g32 = -mu.mu_32 / 2.0;
    const cplx g31 = -mu.mu_31 / 2.0;
    const DriveParams& d = cfg.drive;

    for (std::size_t k = 0; k < kSidebandLines.size(); ++k) {
        const LineSpec& line = kSidebandLines[k];
        cplx gc;
        switch (line.carrier) {
        case Carrier::c21: gc = g21 * (static_cast<double>(line.sign) * 0.5i * d.E21); break;
        case Carrier::c32: gc = g32 * (static_cast<double>(line.sign) * 0.5i * d.E32); break;
        case Carrier::c31: gc = g31 * (-0.5 * d.E31); break;
        }
        SidebandLine l;
        l.spec = line;
        l.frequency = line_frequency(line, cfg);
        l.photon_rate = 2.0 / T * (-1i * gc * s.acc.demod[k]).real();
        l.power = l.frequency * l.photon_rate;
        out.lines.push_back(l);
    }
    return out;
}

SpectralChern chern_from_spectrum(std::span<const SidebandLine> lines, const DriveParams& drive)
{
    double n1 = 0.0;
    double n2 = 0.0;
    for (const LineSpec& want : kSidebandLines) {
        const SidebandLine* found = nullptr;
        for (const SidebandLine& l : lines)
            if (same_line(l.spec, want))
                found = &l;
        if (found == nullptr)
            throw InvalidParameters("sideband line " + line_name(want) + " is missing");
        (want.mode == 1 ? n1 : n2) += want.sign * found->photon_rate;
    }
    // P(omega_k) / omega_k = n_k, so 2 pi P(omega_k) / (omega1 omega2) = 2 pi n_k / omega_other.
    SpectralChern q;
    q.q1 = 2.0 * std::numbers::pi * n1 / drive.omega2;
    q.q2 = 2.0 * std::numbers::pi * n2 / drive.omega1;
    return q;
}

std::vector<DifferenceRow> difference_spectrum(std::span<const SidebandLine> lines_R,
                                               std::span<const SidebandLine> lines_S)
{
    if (lines_R.size() != lines_S.size())
        throw InvalidParameters("R and S spectra have different line counts");
    std::vector<DifferenceRow> rows;
    for (const SidebandLine& r : lines_R) {
        const SidebandLine* s = nullptr;
        for (const SidebandLine& c : lines_S)
            if (same_line(c.spec, r.spec))
                s = &c;
        if (s == nullptr)
            throw InvalidParameters("S spectrum lacks line " + line_name(r.spec));
        if (std::abs(s->frequency - r.frequency) > 1.0e-12 * std::abs(r.frequency))
            throw InvalidParameters("R and S spectra were computed under different drive configurations");
        rows.push_back({r.spec, r.frequency, r.power, s->power, r.power - s->power});
    }
    return rows;
}

double power_to_intensity_si(double power_au, double beam_area_m2)
{
    if (!(beam_area_m2 > 0.0))
        throw InvalidParameters("beam area must be positive");
    return power_au * units::power_si / beam_area_m2;
}

} // namespace tfc
