#pragma once

// Lab-frame RWA Hamiltonian, the rotating-frame 4x4 form used for dynamics,
// the spin-1 effective 3x3 form used for topology, and the diagonal frame
// transform connecting lab and rotating frames.
//
// State ordering throughout: |1,0>, |2,+1>, |2,-1>, |3,0>.

#include <array>

#include <Eigen/Dense>

#include "tfc/model.hpp"

namespace tfc {

using Matrix4 = Eigen::Matrix4cd;
using Matrix3 = Eigen::Matrix3cd;
using State4 = Eigen::Vector4cd;
using State3 = Eigen::Vector3cd;

namespace basis {
inline constexpr int g = 0;      ///< |1,0>
inline constexpr int plus = 1;   ///< |2,+1>
inline constexpr int minus = 2;  ///< |2,-1>
inline constexpr int top = 3;    ///< |3,0>
} // namespace basis

/// Max |H - H^dagger| relative to max |H|; zero for an exactly Hermitian matrix.
double hermiticity_defect(const Eigen::MatrixXcd& h);

/// (0, 1, -1, 0)/sqrt2: the antisymmetric M = +-1 combination no drive couples to.
State4 dark_state();
/// (0, 1, 1, 0)/sqrt2.
State4 bright_state();

/// Lab-frame Hamiltonian at time t with explicit envelope values.
Matrix4 lab_hamiltonian(double t, const Envelopes& env, const MolecularParams& mol, const DriveParams& drive,
                        Enantiomer e);

/// Lab-frame Hamiltonian under steady driving, envelopes at theta_i = omega_i t.
Matrix4 lab_hamiltonian(double t, const SimConfig& cfg, Enantiomer e);

/// Rotating-frame Hamiltonian for given envelope values.
Matrix4 rotating_h4(const Envelopes& env, const DipoleTable& mu, double delta);

Matrix4 rotating_h4(TorusPoint p, const SimConfig& cfg, Enantiomer e);

/// Spin-1 effective Hamiltonian for given envelope values.
Matrix3 effective_h3(const Envelopes& env, const DipoleComponents& mu, double delta);

Matrix3 effective_h3(TorusPoint p, const SimConfig& cfg, Enantiomer e);

/// d(effective_h3)/d(theta_k) for k = 0, 1.
std::array<Matrix3, 2> effective_h3_gradient(TorusPoint p, const SimConfig& cfg, Enantiomer e);

namespace spin1 {
Matrix3 Lx();
Matrix3 Ly();
Matrix3 Lz();
Matrix3 Lplus();
Matrix3 Lminus();
} // namespace spin1

struct FrameTransform
{
    std::array<cplx, 4> phases; ///< diagonal of U(t)
    std::array<double, 4> rates; ///< U(t) = diag(exp(-i rates t))
    double Omega21 = 0.0;
    double Omega32 = 0.0;
    double Omega31 = 0.0;

    Matrix4 matrix() const;
    /// Diagonal of -i U^dagger dU/dt (time independent).
    std::array<double, 4> generator() const;
};

FrameTransform frame_transform(double t, const SimConfig& cfg);

} // namespace tfc
