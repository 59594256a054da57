#pragma once

// Physical parameters, quantum-number bookkeeping, dipole selection rules
// and drive envelopes for the cyclic three-level (four-state) chiral system.
// Everything is in atomic units with hbar = 1.

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace tfc {

using cplx = std::complex<double>;

enum class Enantiomer { R, S };

constexpr Enantiomer mirror(Enantiomer e) noexcept
{
    return e == Enantiomer::R ? Enantiomer::S : Enantiomer::R;
}

constexpr char to_char(Enantiomer e) noexcept { return e == Enantiomer::R ? 'R' : 'S'; }

/// Accepts "R" or "S" (case-insensitive); throws InvalidParameters otherwise.
Enantiomer parse_enantiomer(std::string_view text);

struct RotationalConstants
{
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

struct StateLabel
{
    int J = 0;
    int tau = 0;
    int M = 0;

    friend bool operator==(const StateLabel&, const StateLabel&) = default;
};

struct RotationalLevel
{
    int J = 0;
    int tau = 0;
    double energy = 0.0;
};

/// J = 0 level followed by the three J = 1 levels in ascending energy.
/// Requires A >= B >= C > 0; a reversed ordering throws InvalidParameters.
std::vector<RotationalLevel> asymmetric_top_levels(const RotationalConstants& rc);

enum class PrincipalAxis { a, b, c };

struct DipoleComponents
{
    double mu_a = 0.0;
    double mu_b = 0.0;
    double mu_c = 0.0;
};

struct MolecularParams
{
    // Dipole components of the R species along the principal axes.
    double mu_a = 0.0;
    double mu_b = 0.0;
    double mu_c = 0.0;
    double eps21 = 0.0; ///< epsilon_2 - epsilon_1
    double eps31 = 0.0; ///< epsilon_3 - epsilon_1
    /// Component whose sign differs between the two mirror images.
    PrincipalAxis mirror_axis = PrincipalAxis::c;

    DipoleComponents dipoles(Enantiomer e) const noexcept;
    double eps32() const noexcept { return eps31 - eps21; }
};

struct DriveParams
{
    double E21 = 0.0;
    double E32 = 0.0;
    double E31 = 0.0;
    double m = 0.0;
    double delta = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double omega_r = 0.0;

    // Carrier frequencies, detuned from the molecular resonances.
    double Omega21(const MolecularParams& mol) const noexcept { return mol.eps21 - delta; }
    double Omega32(const MolecularParams& mol) const noexcept { return mol.eps32() - delta; }
    double Omega31(const MolecularParams& mol) const noexcept { return mol.eps31 - 2.0 * delta; }
};

struct TorusPoint
{
    double theta1 = 0.0;
    double theta2 = 0.0;
};

/// Both coordinates reduced to [0, 2pi).
TorusPoint wrap(TorusPoint p) noexcept;

struct SimConfig
{
    MolecularParams molecule;
    DriveParams drive;
    std::vector<Enantiomer> enantiomers{Enantiomer::R, Enantiomer::S};
    double dt = 1.0e7;               ///< integrator step (a.u.)
    double tstar_periods = 2000.0;   ///< horizon in omega2 periods
    int grid = 40;                   ///< torus grid size N
    int stride = 1000;               ///< trajectory downsampling
    bool ramp = true;                ///< adiabatic preparation before t = 0

    double omega2_period() const noexcept;
    double t_star() const noexcept { return tstar_periods * omega2_period(); }
};

/// The 1,2-propanediol data set with the published drive parameters.
SimConfig propanediol_config();

/// Field unit E0 of the bundled data set.
inline constexpr double kPropanediolE0 = 4.0e-9;

/// Transition-dipole elements mu_{i,M';j,M}; independent of M for the chosen
/// polarizations.
struct DipoleTable
{
    cplx mu_21; ///< mu_{2,+-1;1,0}
    cplx mu_32; ///< mu_{3,0;2,+-1}
    cplx mu_31; ///< mu_{3,0;1,0}

    /// Element for |j,M> -> |i,M'>; throws InvalidParameters for transitions
    /// outside the working manifold.
    cplx element(int i, int Mp, int j, int M) const;
};

DipoleTable dipole_matrix_elements(const MolecularParams& mol, Enantiomer e);

/// Sign of the Kral-Shapiro product (mu_b E21)(mu_a E32)(mu_c E31).
int ks_product_sign(const MolecularParams& mol, const DriveParams& drive, Enantiomer e);

struct Envelopes
{
    double e21 = 0.0;
    double e32 = 0.0;
    double e31 = 0.0;
};

Envelopes envelopes(TorusPoint p, const DriveParams& drive) noexcept;

/// Partial derivatives of the envelopes with respect to theta1 and theta2.
std::array<Envelopes, 2> envelope_gradients(TorusPoint p, const DriveParams& drive) noexcept;

/// Magnitudes |mu_ij| E_ij / 2 of the three dipole couplings (a.u. energy).
std::array<double, 3> coupling_energies(const MolecularParams& mol, const DriveParams& drive);

enum class Check {
    Domain,           ///< sign/positivity requirements on single parameters
    RotatingWave,     ///< coupling / 2 against the carrier frequency
    AdiabaticOrder,   ///< detuning and modulation against the coupling scale
    RampRate,         ///< omega_r against omega1
    Commensurability, ///< omega1 / omega2 near a low-order rational
    Integrator,       ///< step and output controls
};

enum class Severity { Error, Warning };

struct Violation
{
    Check check;
    Severity severity;
    double ratio; ///< measured quantity over its allowed bound (> 1 means violated)
    std::string message;
};

struct ValidationReport
{
    std::vector<Violation> violations;

    /// True when no Error-severity violation is present.
    bool ok() const noexcept;
    std::string describe() const;
};

struct ValidationThresholds
{
    double rotating_wave = 0.01;
    double adiabatic = 0.2;
    double ramp_fraction = 0.1;
    double rational_tolerance = 1.0e-6;
    int max_denominator = 10;
};

ValidationReport validate_config(const SimConfig& cfg, const ValidationThresholds& limits = {});

std::string_view check_name(Check c) noexcept;

} // namespace tfc
