#include "tfc/hamiltonian.hpp"

#include <cmath>

namespace tfc {

using namespace std::complex_literals;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

// Carrier-frame phase rates of U(t) on the four basis states.
std::array<double, 4> frame_rates(const MolecularParams& mol, const DriveParams& drive)
{
    const double eps2 = mol.eps21;
    return {eps2 - drive.Omega21(mol), eps2, eps2, eps2 + drive.Omega32(mol)};
}

} // namespace

double hermiticity_defect(const Eigen::MatrixXcd& h)
{
    const double scale = h.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        return 0.0;
    return (h - h.adjoint()).cwiseAbs().maxCoeff() / scale;
}

State4 dark_state()
{
    State4 d(0.0, 1.0, -1.0, 0.0);
    return d / kSqrt2;
}

State4 bright_state()
{
    State4 b(0.0, 1.0, 1.0, 0.0);
    return b / kSqrt2;
}

Matrix4 lab_hamiltonian(double t, const Envelopes& env, const MolecularParams& mol, const DriveParams& drive,
                        Enantiomer e)
{
    using namespace basis;
    const DipoleTable mu = dipole_matrix_elements(mol, e);
    const double O21 = drive.Omega21(mol);
    const double O32 = drive.Omega32(mol);
    const double O31 = drive.Omega31(mol);

    Matrix4 h = Matrix4::Zero();
    h(g, g) = 0.0; // epsilon_1 is the energy origin
    h(plus, plus) = mol.eps21;
    h(minus, minus) = mol.eps21;
    h(top, top) = mol.eps31;

    const cplx c21 = -env.e21 * (1i * mu.mu_21 / 2.0) * std::polar(1.0, -O21 * t);
    const cplx c32 = -env.e32 * (mu.mu_32 / 2.0) * std::polar(1.0, -O32 * t);
    const cplx c31 = -env.e31 * (mu.mu_31 / 2.0) * std::polar(1.0, -O31 * t);

    for (int k : {plus, minus}) {
        h(k, g) = c21;
        h(g, k) = std::conj(c21);
        h(top, k) = c32;
        h(k, top) = std::conj(c32);
    }
    h(top, g) = c31;
    h(g, top) = std::conj(c31);
    return h;
}

Matrix4 lab_hamiltonian(double t, const SimConfig& cfg, Enantiomer e)
{
    const TorusPoint p{cfg.drive.omega1 * t, cfg.drive.omega2 * t};
    return lab_hamiltonian(t, envelopes(p, cfg.drive), cfg.molecule, cfg.drive, e);
}

Matrix4 rotating_h4(const Envelopes& env, const DipoleTable& mu, double delta)
{
    using namespace basis;
    // Written as in the 1/2 * (matrix) form: the mu_21 and mu_31 elements carry
    // a factor -i, which combines with the i in the lab coupling for mu_21.
    const cplx a21 = -(1i * mu.mu_21) * env.e21 / 2.0; // -mu_b E21 / (2 sqrt6)
    const cplx a32 = -mu.mu_32 * env.e32 / 2.0;         // -mu_a E32 / (4 sqrt2)
    const cplx a31 = -mu.mu_31 * env.e31 / 2.0;         // +i mu_c E31 / (2 sqrt3)

    Matrix4 h = Matrix4::Zero();
    h(g, g) = -delta;
    h(top, top) = delta;
    for (int k : {plus, minus}) {
        h(k, g) = a21;
        h(g, k) = std::conj(a21);
        h(top, k) = a32;
        h(k, top) = std::conj(a32);
    }
    h(top, g) = a31;
    h(g, top) = std::conj(a31);
    return h;
}

Matrix4 rotating_h4(TorusPoint p, const SimConfig& cfg, Enantiomer e)
{
    return rotating_h4(envelopes(p, cfg.drive), dipole_matrix_elements(cfg.molecule, e), cfg.drive.delta);
}

namespace spin1 {

Matrix3 Lx()
{
    Matrix3 m;
    m << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    return m / kSqrt2;
}

Matrix3 Ly()
{
    Matrix3 m;
    m << 0, -1i, 0, 1i, 0, -1i, 0, 1i, 0;
    return m / kSqrt2;
}

Matrix3 Lz()
{
    Matrix3 m = Matrix3::Zero();
    m(0, 0) = 1.0;
    m(2, 2) = -1.0;
    return m;
}

Matrix3 Lplus()
{
    Matrix3 m = Matrix3::Zero();
    m(0, 1) = kSqrt2;
    m(1, 2) = kSqrt2;
    return m;
}

Matrix3 Lminus() { return Lplus().adjoint(); }

} // namespace spin1

Matrix3 effective_h3(const Envelopes& env, const DipoleComponents& mu, double delta)
{
    const double cx = -mu.mu_b * env.e21 / (2.0 * kSqrt3);
    const double cy = -mu.mu_a * env.e32 / 4.0;
    const double cz = mu.mu_c * env.e31 / (2.0 * kSqrt3);

    // L+^2 + L-^2 = 2 (|+1><-1| + |-1><+1|)
    Matrix3 h;
    const cplx w = (cx - 1i * cy) / kSqrt2;
    h << cz, w, -delta,
         std::conj(w), 0.0, w,
         -delta, std::conj(w), -cz;
    return h;
}

Matrix3 effective_h3(TorusPoint p, const SimConfig& cfg, Enantiomer e)
{
    return effective_h3(envelopes(p, cfg.drive), cfg.molecule.dipoles(e), cfg.drive.delta);
}

std::array<Matrix3, 2> effective_h3_gradient(TorusPoint p, const SimConfig& cfg, Enantiomer e)
{
    const auto grads = envelope_gradients(p, cfg.drive);
    const DipoleComponents mu = cfg.molecule.dipoles(e);
    // The Hamiltonian is linear in the envelopes; the delta term does not depend on theta.
    return {effective_h3(grads[0], mu, 0.0), effective_h3(grads[1], mu, 0.0)};
}

Matrix4 FrameTransform::matrix() const
{
    Matrix4 u = Matrix4::Zero();
    for (int k = 0; k < 4; ++k)
        u(k, k) = phases[k];
    return u;
}

std::array<double, 4> FrameTransform::generator() const
{
    return {-rates[0], -rates[1], -rates[2], -rates[3]};
}

FrameTransform frame_transform(double t, const SimConfig& cfg)
{
    const auto rates = frame_rates(cfg.molecule, cfg.drive);
    FrameTransform f;
    f.rates = rates;
    for (int k = 0; k < 4; ++k)
        f.phases[k] = std::polar(1.0, -rates[k] * t);
    f.Omega21 = cfg.drive.Omega21(cfg.molecule);
    f.Omega32 = cfg.drive.Omega32(cfg.molecule);
    f.Omega31 = cfg.drive.Omega31(cfg.molecule);
    return f;
}

} // namespace tfc
