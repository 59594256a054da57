#pragma once

#include <array>
#include <string>

namespace tfc {

enum class Carrier { c21, c32, c31 };

/// One lab-frame sideband Omega_ij + sign * omega_mode.
struct LineSpec
{
    Carrier carrier;
    int mode; ///< 1 or 2
    int sign; ///< +1 or -1
};

/// The eight sidebands carrying the modulation-frequency exchange; the first
/// four belong to omega1, the last four to omega2.
inline constexpr std::array<LineSpec, 8> kSidebandLines{{
    {Carrier::c21, 1, +1},
    {Carrier::c21, 1, -1},
    {Carrier::c31, 1, +1},
    {Carrier::c31, 1, -1},
    {Carrier::c32, 2, +1},
    {Carrier::c32, 2, -1},
    {Carrier::c31, 2, +1},
    {Carrier::c31, 2, -1},
}};

inline std::string carrier_label(Carrier c)
{
    switch (c) {
    case Carrier::c21: return "21";
    case Carrier::c32: return "32";
    case Carrier::c31: return "31";
    }
    return "?";
}

/// "+w1", "-w2", ...
inline std::string sideband_label(const LineSpec& l)
{
    return std::string(l.sign > 0 ? "+" : "-") + "w" + std::to_string(l.mode);
}

} // namespace tfc
