#pragma once

// Time evolution in the rotating frame: adiabatic preparation ramp, chirped
// drive phases, exponential-midpoint propagation, band populations, and the
// quantized pumping rate between the two modulation tones.

#include <array>
#include <cstddef>
#include <vector>

#include "tfc/hamiltonian.hpp"
#include "tfc/sidebands.hpp"

namespace tfc {

struct RampValues
{
    double alpha = 0.0; ///< amplitude ramp
    double beta = 0.0;  ///< frequency (chirp) ramp
};

RampValues ramps(double t, double omega_r) noexcept;

/// Accumulated phases theta_i(t). With the ramp, theta_i = omega_i t for
/// t >= 0 and -omega_i * int_t^0 beta for t < 0, so theta(0) = 0. Without the
/// ramp, theta_i = omega_i t throughout. Not reduced modulo 2 pi.
TorusPoint drive_phases(double t, const DriveParams& drive, bool ramp = true) noexcept;

enum class InitialState {
    Ground,    ///< |1,0>
    LowerBand, ///< lowest bright eigenvector of the rotating-frame Hamiltonian at t_start
};

struct EvolveOptions
{
    bool ramp = true;
    InitialState initial = InitialState::Ground;
    int stride = 1000;
    double dt = 1.0e7;
    /// Extra times (inside [t_start, t_end]) that get an exact sample.
    std::vector<double> record_times;
};

/// EvolveOptions populated from the simulation block of a config.
EvolveOptions evolve_options(const SimConfig& cfg);

/// Time integrals over [0, t] accumulated at full step resolution.
struct Accumulators
{
    double work1 = 0.0; ///< int <d H / d theta1> dt
    double work2 = 0.0; ///< int <d H / d theta2> dt
    /// int exp(-i s theta_k(t)) rho_ab(t) dt per sideband line, with rho_ab the
    /// rotating-frame coherence psi_a^* psi_b summed over M.
    std::array<cplx, 8> demod{};
};

struct TrajectorySample
{
    double t = 0.0;
    State4 psi;
    TorusPoint theta;
    double alpha = 0.0;
    double beta = 0.0;
    double dH1 = 0.0; ///< <d H / d theta1> at t
    double dH2 = 0.0; ///< <d H / d theta2> at t
    Accumulators acc;
};

struct Trajectory
{
    Enantiomer enantiomer = Enantiomer::R;
    bool ramp = true;
    double dt = 0.0;
    int stride = 1;
    std::size_t steps = 0;
    double max_norm_error = 0.0;
    double acc_origin = 0.0; ///< start of the accumulated integrals, max(t_start, 0)
    std::vector<TrajectorySample> samples;

    /// Sample whose time is closest to t.
    const TrajectorySample& nearest(double t) const;
};

/// Rotating-frame Hamiltonian at time t along the prepared drive protocol.
Matrix4 protocol_hamiltonian(double t, const SimConfig& cfg, Enantiomer e, bool ramp);

/// One exponential step psi <- exp(-i H h) psi through the eigendecomposition
/// of H. Returns the spectral radius of H.
double exponential_step(const Matrix4& H, double h, State4& psi);

/// Fourth-order Magnus step: H1 and H2 are the Hamiltonian at the Gauss nodes
/// t0 + (1/2 -+ sqrt3/6) h. Exactly unitary. Returns the spectral radius of the
/// effective generator.
double magnus4_step(const Matrix4& H1, const Matrix4& H2, double h, State4& psi);

/// Propagates i d/dt psi = H4(t) psi from t_start to t_end with fourth-order
/// Magnus steps. Throws IntegratorFailure on norm drift above
/// 1e-9 and ConfigError when |H| dt exceeds 0.5.
Trajectory evolve(const SimConfig& cfg, Enantiomer e, double t_start, double t_end, const EvolveOptions& opt);

struct BandPopulations
{
    double t = 0.0;
    double L = 0.0;
    double M = 0.0;
    double U = 0.0;
    double dark = 0.0;
    bool ambiguous = false; ///< instantaneous bright spectrum near-degenerate
};

/// Projection of each stored state onto the instantaneous eigenvectors of the
/// rotating-frame Hamiltonian, with the dark state separated first.
std::vector<BandPopulations> band_populations(const Trajectory& traj, const SimConfig& cfg, Enantiomer e);

BandPopulations populations_at(const TrajectorySample& s, const SimConfig& cfg, Enantiomer e);

struct PumpingReport
{
    double P1 = 0.0;        ///< average power at omega1
    double P2 = 0.0;        ///< average power at omega2
    double P21 = 0.0;       ///< (P2 - P1) / 2
    double q = 0.0;         ///< 2 pi P21 / (omega1 omega2)
    double window_periods = 0.0;
    double window = 0.0;    ///< averaging time actually used (a.u.)
};

PumpingReport pumping_rate(const Trajectory& traj, const SimConfig& cfg, Enantiomer e, double window_periods);

/// Fibonacci numbers in [lo, hi].
std::vector<int> fibonacci_between(int lo, int hi);
bool is_fibonacci(double periods);

struct ResponseCheck
{
    bool skipped = false;
    double gap = 0.0;
    std::array<double, 2> measured{};  ///< <d H / d theta_i> after the sweep
    std::array<double, 2> predicted{}; ///< d eps / d theta_i -+ omega_j F
    std::array<double, 2> energy_gradient{};
    double curvature = 0.0;
    double residual = 0.0;             ///< max_i |measured - predicted|
};

struct ResponseCheckOptions
{
    double dt = 1.0e6;
    /// Duration of the velocity ramp, in units of 1 / (band gap at p).
    double ramp_gaps = 400.0;
};

/// Starts in band l, accelerates the torus flow smoothly up to (omega1,
/// omega2) so that the trajectory arrives at p, and compares the measured
/// generalized forces with the first-order adiabatic prediction.
ResponseCheck adiabatic_response_check(TorusPoint p, const SimConfig& cfg, Enantiomer e, int band,
                                       const ResponseCheckOptions& opt = {});

} // namespace tfc
