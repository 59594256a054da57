#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "tfc/model.hpp"

namespace tfc::test {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// The bundled data set with the 31 field raised tenfold. Same m, delta and
/// Chern numbers, but the minimum band gap is ten times larger, so the
/// dynamics stays adiabatic and pumping is quantized to well under 1%.
inline SimConfig adiabatic_variant()
{
    SimConfig cfg = propanediol_config();
    cfg.drive.E31 *= 10.0;
    return cfg;
}

inline TorusPoint random_point(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, two_pi);
    const double a = u(rng);
    return {a, u(rng)};
}

inline bool relatively_close(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace tfc::test
