#include "tfc/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tfc/errors.hpp"

namespace tfc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

} // namespace

Enantiomer parse_enantiomer(std::string_view text)
{
    if (text.size() == 1) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
        if (c == 'R')
            return Enantiomer::R;
        if (c == 'S')
            return Enantiomer::S;
    }
    throw InvalidParameters("unknown enantiomer label '" + std::string(text) + "' (expected R or S)");
}

std::vector<RotationalLevel> asymmetric_top_levels(const RotationalConstants& rc)
{
    if (!(rc.C > 0.0))
        throw InvalidParameters("rotational constants must be positive");
    if (rc.A < rc.B || rc.B < rc.C)
        throw InvalidParameters("rotational constants must satisfy A >= B >= C");

    // In the J = 1 manifold J_k^2 acts as 1 - |k><k| on the Cartesian states,
    // so the level whose dipole axis is k sits at (sum of constants) - k.
    std::array<double, 3> j1{rc.B + rc.C, rc.A + rc.C, rc.A + rc.B};
    std::sort(j1.begin(), j1.end());

    std::vector<RotationalLevel> levels;
    levels.push_back({0, 1, 0.0});
    for (int k = 0; k < 3; ++k)
        levels.push_back({1, k + 2, j1[k]});
    return levels;
}

DipoleComponents MolecularParams::dipoles(Enantiomer e) const noexcept
{
    DipoleComponents d{mu_a, mu_b, mu_c};
    if (e == Enantiomer::S) {
        switch (mirror_axis) {
        case PrincipalAxis::a: d.mu_a = -d.mu_a; break;
        case PrincipalAxis::b: d.mu_b = -d.mu_b; break;
        case PrincipalAxis::c: d.mu_c = -d.mu_c; break;
        }
    }
    return d;
}

TorusPoint wrap(TorusPoint p) noexcept
{
    auto w = [](double x) {
        double r = std::fmod(x, two_pi);
        if (r < 0.0)
            r += two_pi;
        return r >= two_pi ? 0.0 : r;
    };
    return {w(p.theta1), w(p.theta2)};
}

double SimConfig::omega2_period() const noexcept { return two_pi / drive.omega2; }

SimConfig propanediol_config()
{
    constexpr double E0 = kPropanediolE0;
    const double sqrt3 = std::sqrt(3.0);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;

    SimConfig cfg;
    cfg.molecule.mu_a = 0.47;
    cfg.molecule.mu_b = 0.75;
    cfg.molecule.mu_c = 0.14;
    cfg.molecule.eps21 = 4.4e-8;
    cfg.molecule.eps31 = 4.7e-8;
    cfg.molecule.mirror_axis = PrincipalAxis::c;

    cfg.drive.E21 = 5.0 * sqrt3 * E0;
    cfg.drive.E32 = 6.0 * E0;
    cfg.drive.E31 = sqrt3 * E0;
    cfg.drive.m = 1.4;
    cfg.drive.omega1 = 1.0e-11;
    cfg.drive.delta = 1.0e-11;
    cfg.drive.omega2 = phi * cfg.drive.omega1;
    cfg.drive.omega_r = 2.0e-13;
    return cfg;
}

cplx DipoleTable::element(int i, int Mp, int j, int M) const
{
    if (i == 2 && std::abs(Mp) == 1 && j == 1 && M == 0)
        return mu_21;
    if (i == 3 && Mp == 0 && j == 2 && std::abs(M) == 1)
        return mu_32;
    if (i == 3 && Mp == 0 && j == 1 && M == 0)
        return mu_31;
    std::ostringstream os;
    os << "no driven transition |" << j << ',' << M << "> -> |" << i << ',' << Mp << '>';
    throw InvalidParameters(os.str());
}

DipoleTable dipole_matrix_elements(const MolecularParams& mol, Enantiomer e)
{
    using namespace std::complex_literals;
    const DipoleComponents d = mol.dipoles(e);
    return {
        -1i * d.mu_b / std::sqrt(6.0),
        cplx(d.mu_a / (2.0 * std::sqrt(2.0)), 0.0),
        -1i * d.mu_c / std::sqrt(3.0),
    };
}

int ks_product_sign(const MolecularParams& mol, const DriveParams& drive, Enantiomer e)
{
    const DipoleComponents d = mol.dipoles(e);
    const std::array<double, 3> factors{d.mu_b * drive.E21, d.mu_a * drive.E32, d.mu_c * drive.E31};
    int sign = 1;
    for (double f : factors) {
        if (f == 0.0)
            throw DegenerateCycle("Kral-Shapiro product vanishes: a dipole component or field amplitude is zero");
        sign *= sign_of(f);
    }
    return sign;
}

Envelopes envelopes(TorusPoint p, const DriveParams& drive) noexcept
{
    return {
        drive.E21 * std::sin(p.theta1),
        drive.E32 * std::sin(p.theta2),
        drive.E31 * (drive.m - std::cos(p.theta1) - std::cos(p.theta2)),
    };
}

std::array<Envelopes, 2> envelope_gradients(TorusPoint p, const DriveParams& drive) noexcept
{
    return {{
        {drive.E21 * std::cos(p.theta1), 0.0, drive.E31 * std::sin(p.theta1)},
        {0.0, drive.E32 * std::cos(p.theta2), drive.E31 * std::sin(p.theta2)},
    }};
}

std::array<double, 3> coupling_energies(const MolecularParams& mol, const DriveParams& drive)
{
    const DipoleTable mu = dipole_matrix_elements(mol, Enantiomer::R);
    return {
        std::abs(mu.mu_21) * drive.E21 / 2.0,
        std::abs(mu.mu_32) * drive.E32 / 2.0,
        std::abs(mu.mu_31) * drive.E31 / 2.0,
    };
}

bool ValidationReport::ok() const noexcept
{
    return std::none_of(violations.begin(), violations.end(),
                        [](const Violation& v) { return v.severity == Severity::Error; });
}

std::string ValidationReport::describe() const
{
    std::ostringstream os;
    for (const auto& v : violations) {
        os << (v.severity == Severity::Error ? "error" : "warning") << " [" << check_name(v.check)
           << "] " << v.message;
        if (std::isfinite(v.ratio))
            os << " (ratio " << v.ratio << ")";
        os << '\n';
    }
    return os.str();
}

std::string_view check_name(Check c) noexcept
{
    switch (c) {
    case Check::Domain: return "domain";
    case Check::RotatingWave: return "rotating-wave";
    case Check::AdiabaticOrder: return "adiabatic-order";
    case Check::RampRate: return "ramp-rate";
    case Check::Commensurability: return "commensurability";
    case Check::Integrator: return "integrator";
    }
    return "unknown";
}

ValidationReport validate_config(const SimConfig& cfg, const ValidationThresholds& limits)
{
    ValidationReport report;
    auto add = [&](Check c, Severity s, double ratio, std::string msg) {
        report.violations.push_back({c, s, ratio, std::move(msg)});
    };
    const auto nan = std::numeric_limits<double>::quiet_NaN();

    const MolecularParams& mol = cfg.molecule;
    const DriveParams& d = cfg.drive;

    if (!(mol.eps21 > 0.0) || !(mol.eps31 > mol.eps21))
        add(Check::Domain, Severity::Error, nan, "transition energies must satisfy eps31 > eps21 > 0");
    if (d.E21 < 0.0 || d.E32 < 0.0 || d.E31 < 0.0)
        add(Check::Domain, Severity::Error, nan, "field amplitudes must be non-negative");
    if (!(d.omega1 > 0.0) || !(d.omega2 > 0.0) || !(d.omega_r > 0.0))
        add(Check::Domain, Severity::Error, nan, "omega1, omega2 and omega_r must be positive");
    if (!(cfg.dt > 0.0))
        add(Check::Integrator, Severity::Error, nan, "dt must be positive");
    if (!(cfg.tstar_periods > 0.0))
        add(Check::Integrator, Severity::Error, nan, "tstar_periods must be positive");
    if (cfg.grid < 8)
        add(Check::Integrator, Severity::Error, nan, "torus grid must be at least 8");
    if (cfg.stride < 1)
        add(Check::Integrator, Severity::Error, nan, "stride must be at least 1");
    if (cfg.enantiomers.empty())
        add(Check::Integrator, Severity::Error, nan, "no enantiomer selected");
    if (!report.ok())
        return report;

    const auto couplings = coupling_energies(mol, d);
    const double max_coupling = *std::max_element(couplings.begin(), couplings.end());
    const double min_coupling = *std::min_element(couplings.begin(), couplings.end());
    const double min_carrier = std::min({d.Omega21(mol), d.Omega32(mol), d.Omega31(mol)});

    if (min_carrier <= 0.0) {
        add(Check::RotatingWave, Severity::Error, nan, "detuning exceeds a transition frequency");
    } else {
        const double ratio = max_coupling / (limits.rotating_wave * min_carrier);
        if (ratio > 1.0)
            add(Check::RotatingWave, Severity::Warning, ratio,
                "largest coupling/2 is not small against the lowest carrier frequency");
    }

    const double slow = std::max({std::abs(d.delta), d.omega1, d.omega2});
    if (min_coupling > 0.0) {
        const double ratio = slow / (limits.adiabatic * min_coupling);
        if (ratio > 1.0)
            add(Check::AdiabaticOrder, Severity::Error, ratio,
                "detuning or modulation frequency not small against the weakest coupling/2");
    }

    {
        const double ratio = d.omega_r / (limits.ramp_fraction * d.omega1);
        if (ratio > 1.0)
            add(Check::RampRate, Severity::Error, ratio, "ramp rate omega_r exceeds omega1/10");
    }

    {
        const double x = d.omega1 / d.omega2;
        for (int q = 1; q <= limits.max_denominator; ++q) {
            const double p = std::round(x * q);
            if (p < 1.0)
                continue;
            const double dist = std::abs(x - p / q);
            if (dist <= limits.rational_tolerance) {
                std::ostringstream os;
                os << "omega1/omega2 is within " << dist << " of " << static_cast<long>(p) << '/' << q;
                add(Check::Commensurability, Severity::Error, limits.rational_tolerance / std::max(dist, 1e-300),
                    os.str());
                break;
            }
        }
    }
    return report;
}

} // namespace tfc
