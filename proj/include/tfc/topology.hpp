#pragma once

// Adiabatic bands of the spin-1 effective Hamiltonian over the drive torus,
// lattice Berry curvature and Chern numbers, and (m, delta) phase diagrams.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "tfc/hamiltonian.hpp"

namespace tfc {

enum Band : int { L = 0, M = 1, U = 2 };

struct BandDecomposition
{
    std::array<double, 3> energies{}; ///< ascending: L, M, U
    Matrix3 vectors;                  ///< column l is band l
    double gap = 0.0;                 ///< smallest neighbouring-level spacing
    bool near_degenerate = false;     ///< gap < 1e-6 x spectral radius
};

/// Eigen-decomposition with the gauge fixed so the largest-magnitude
/// component of each eigenvector is real and positive.
BandDecomposition decompose(const Matrix3& h);

BandDecomposition band_decomposition(TorusPoint p, const SimConfig& cfg, Enantiomer e);

/// Lattice data on an N x N grid, theta_k = 2 pi k / N. Arrays are row-major
/// in theta1 (index i) then theta2 (index j).
struct BandData
{
    int N = 0;
    std::vector<std::array<double, 3>> energies;  ///< per grid node
    std::vector<Matrix3> vectors;                 ///< per grid node
    std::vector<std::array<double, 3>> curvature; ///< per plaquette (lower-left corner)
    std::array<int, 3> chern{};
    double min_gap = 0.0;

    std::size_t index(int i, int j) const noexcept;
    /// Plaquette curvature of one band as a flat array.
    std::vector<double> band_curvature(int band) const;
};

/// Throws GapClosing when a node is degenerate, a link has vanishing overlap,
/// or a plaquette flux reaches +-pi.
BandData compute_band_data(const SimConfig& cfg, Enantiomer e, int N);

struct ChernResult
{
    std::array<int, 3> C{};
    double min_gap = 0.0;
};

ChernResult chern_numbers(const SimConfig& cfg, Enantiomer e, int N);

/// C_L at zero detuning: -2 sgn(m) ks_sign inside |m| < 2, else 0.
int expected_chern(double m, int ks_sign);

struct PhaseCell
{
    double m = 0.0;
    double delta = 0.0;
    std::optional<std::array<int, 3>> chern; ///< empty on a gap closing
    double min_gap = 0.0;
    bool boundary() const noexcept { return !chern.has_value(); }
};

/// Cells in m-major order (all delta values for the first m, then the next).
std::vector<PhaseCell> phase_diagram(const SimConfig& templ, std::span<const double> m_values,
                                     std::span<const double> delta_values, Enantiomer e, int N,
                                     unsigned workers = 1);

/// 61 points over [-3, 3].
std::vector<double> default_m_values();
/// 21 points over [-g, g] with g the weakest coupling |mu_ij| E_ij / 2.
std::vector<double> default_delta_values(const SimConfig& cfg);

/// Mean of samples on the N x N grid; the discrete torus average.
double torus_average(std::span<const double> samples);

/// Berry curvature density F_l(theta) = i<d1 l|d2 l> + c.c. (per unit theta^2)
/// by central differences of gauge-fixed eigenvectors.
double berry_curvature_fd(TorusPoint p, const SimConfig& cfg, Enantiomer e, int band, double h = 1.0e-5);

/// Central-difference gradient of band energy l.
std::array<double, 2> band_energy_gradient(TorusPoint p, const SimConfig& cfg, Enantiomer e, int band,
                                           double h = 1.0e-5);

} // namespace tfc
