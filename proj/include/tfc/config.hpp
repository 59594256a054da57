#pragma once

// Line-oriented configuration files:
//
//   [molecule]      mu_a mu_b mu_c eps21 eps31 (required), mirror_axis (a|b|c)
//   [drive]         E21 E32 E31 m delta omega1 omega2 omega_r (required)
//   [simulation]    dt tstar_periods grid stride ramp enantiomer (optional)
//
// Entries are `key = value`; '#' starts a comment. Unknown sections or keys,
// duplicates and unparsable values raise ConfigError.

#include <filesystem>
#include <string>
#include <string_view>

#include "tfc/model.hpp"

namespace tfc {

SimConfig parse_config(std::string_view text, std::string_view source = "<config>");
SimConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(format_config(c)) reproduces c exactly.
std::string format_config(const SimConfig& cfg);

/// "R", "S" or "both".
std::string enantiomer_selection(const std::vector<Enantiomer>& list);
std::vector<Enantiomer> parse_enantiomer_selection(std::string_view text);

} // namespace tfc
