#pragma once

// CSV and SVG artifact writers. Numbers are printed with %.17e so identical
// inputs always produce byte-identical files.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tfc/dynamics.hpp"
#include "tfc/spectrum.hpp"
#include "tfc/topology.hpp"

namespace tfc::io {

std::string number(double x);

class CsvTable
{
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::size_t rows() const noexcept { return rows_.size(); }
    std::string str() const;
    /// Writes to a temporary sibling and renames, so readers never see a partial file.
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& content);

CsvTable trajectory_table(const Trajectory& traj, const SimConfig& cfg, Enantiomer e);
CsvTable phase_diagram_table(std::span<const PhaseCell> cells);
CsvTable spectrum_table(std::span<const SidebandLine> R, std::span<const SidebandLine> S);

std::string phase_diagram_svg(std::span<const PhaseCell> cells, std::span<const double> m_values,
                              std::span<const double> delta_values, Enantiomer e);
/// Stem plot of the eight lines; either span may be empty.
std::string spectrum_svg(std::span<const SidebandLine> R, std::span<const SidebandLine> S);
std::string populations_svg(std::span<const BandPopulations> pops, Enantiomer e);

} // namespace tfc::io
