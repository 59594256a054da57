#include "tfc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tfc/errors.hpp"

namespace tfc::io {

std::string number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header)
    : header_(std::move(header))
{
}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size())
        throw InvalidParameters("CSV row width does not match the header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const
{
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k)
                out += ',';
            out += cells[k];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_)
        line(r);
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out)
            throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

CsvTable trajectory_table(const Trajectory& traj, const SimConfig& cfg, Enantiomer e)
{
    CsvTable t({"t", "pop_L", "pop_M", "pop_U", "pop_dark", "norm_err", "inst_P_w1", "inst_P_w2"});
    for (const TrajectorySample& s : traj.samples) {
        const BandPopulations p = populations_at(s, cfg, e);
        // instantaneous tone powers use the chirped frequencies omega_i beta(t)
        const double p1 = cfg.drive.omega1 * s.beta * s.dH1;
        const double p2 = cfg.drive.omega2 * s.beta * s.dH2;
        t.add_row({number(s.t), number(p.L), number(p.M), number(p.U), number(p.dark),
                   number(std::abs(s.psi.norm() - 1.0)), number(p1), number(p2)});
    }
    return t;
}

CsvTable phase_diagram_table(std::span<const PhaseCell> cells)
{
    CsvTable t({"m", "delta", "C_L", "C_M", "C_U", "min_gap", "boundary_flag"});
    for (const PhaseCell& c : cells) {
        if (c.chern) {
            const auto& C = *c.chern;
            t.add_row({number(c.m), number(c.delta), std::to_string(C[0]), std::to_string(C[1]),
                       std::to_string(C[2]), number(c.min_gap), "0"});
        } else {
            t.add_row({number(c.m), number(c.delta), "", "", "", number(c.min_gap), "1"});
        }
    }
    return t;
}

CsvTable spectrum_table(std::span<const SidebandLine> R, std::span<const SidebandLine> S)
{
    if (!R.empty() && !S.empty()) {
        CsvTable t({"carrier", "sideband", "frequency_au", "P_av_R_au", "P_av_S_au", "diff_au"});
        for (const DifferenceRow& row : difference_spectrum(R, S))
            t.add_row({carrier_label(row.spec.carrier), sideband_label(row.spec), number(row.frequency),
                       number(row.P_R), number(row.P_S), number(row.diff)});
        return t;
    }
    const bool r = !R.empty();
    std::span<const SidebandLine> one = r ? R : S;
    CsvTable t({"carrier", "sideband", "frequency_au", r ? "P_av_R_au" : "P_av_S_au"});
    for (const SidebandLine& l : one)
        t.add_row({l.carrier(), l.sideband(), number(l.frequency), number(l.power)});
    return t;
}

namespace {

std::string colour_for(int c)
{
    switch (c) {
    case -2: return "#2166ac";
    case -1: return "#92c5de";
    case 0: return "#f7f7f7";
    case 1: return "#f4a582";
    case 2: return "#b2182b";
    default: return c < 0 ? "#053061" : "#67001f";
    }
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

} // namespace

std::string phase_diagram_svg(std::span<const PhaseCell> cells, std::span<const double> m_values,
                              std::span<const double> delta_values, Enantiomer e)
{
    const int nm = static_cast<int>(m_values.size());
    const int nd = static_cast<int>(delta_values.size());
    const double cw = 10.0, ch = 14.0, left = 70.0, top = 30.0;
    const double width = left + nm * cw + 20.0;
    const double height = top + nd * ch + 50.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<text x=\"" << left << "\" y=\"18\" font-size=\"13\">C_L (" << to_char(e) << ") over m and delta</text>\n";
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nd; ++j) {
            const PhaseCell& c = cells[static_cast<std::size_t>(i) * nd + j];
            const double x = left + i * cw;
            const double y = top + (nd - 1 - j) * ch;
            const std::string fill = c.chern ? colour_for((*c.chern)[0]) : "#000000";
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch
               << "\" fill=\"" << fill << "\"/>\n";
        }
    const double base = top + nd * ch;
    os << "<text x=\"" << left << "\" y=\"" << base + 16 << "\" font-size=\"11\">m = " << fmt(m_values.front())
       << "</text>\n";
    os << "<text x=\"" << left + nm * cw - 60 << "\" y=\"" << base + 16 << "\" font-size=\"11\">m = "
       << fmt(m_values.back()) << "</text>\n";
    os << "<text x=\"2\" y=\"" << top + 10 << "\" font-size=\"10\">" << sci(delta_values.back()) << "</text>\n";
    os << "<text x=\"2\" y=\"" << base << "\" font-size=\"10\">" << sci(delta_values.front()) << "</text>\n";
    os << "<text x=\"" << left << "\" y=\"" << base + 34
       << "\" font-size=\"11\">blue -2, white 0, red +2, black: gap closing</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string spectrum_svg(std::span<const SidebandLine> R, std::span<const SidebandLine> S)
{
    std::vector<double> freqs;
    double pmax = 0.0;
    for (auto set : {R, S})
        for (const auto& l : set) {
            freqs.push_back(l.frequency);
            pmax = std::max(pmax, std::abs(l.power));
        }
    if (freqs.empty())
        throw InvalidParameters("no spectrum to plot");
    const auto [fmin_it, fmax_it] = std::minmax_element(freqs.begin(), freqs.end());
    const double fmin = *fmin_it, fmax = *fmax_it;
    const double W = 640, H = 360, left = 60, right = 20, mid = H / 2;
    const double span = fmax > fmin ? fmax - fmin : 1.0;
    auto xpos = [&](double f) { return left + (W - left - right) * (f - fmin) / span; };
    auto ypos = [&](double p) { return mid - (pmax > 0.0 ? p / pmax : 0.0) * (H / 2 - 30); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<line x1=\"" << left << "\" y1=\"" << mid << "\" x2=\"" << W - right << "\" y2=\"" << mid
       << "\" stroke=\"#444\"/>\n";
    auto stems = [&](std::span<const SidebandLine> set, const char* colour, double shift) {
        for (const auto& l : set) {
            const double x = xpos(l.frequency) + shift;
            os << "<line x1=\"" << x << "\" y1=\"" << mid << "\" x2=\"" << x << "\" y2=\"" << ypos(l.power)
               << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
            os << "<circle cx=\"" << x << "\" cy=\"" << ypos(l.power) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
        }
    };
    stems(R, "#c0392b", -2.0);
    stems(S, "#17a2b8", 2.0);
    os << "<text x=\"" << left << "\" y=\"18\" font-size=\"12\">sideband power per molecule (a.u.), max "
       << sci(pmax) << "; red R, cyan S</text>\n";
    os << "<text x=\"" << left << "\" y=\"" << H - 8 << "\" font-size=\"11\">" << sci(fmin) << "</text>\n";
    os << "<text x=\"" << W - right - 70 << "\" y=\"" << H - 8 << "\" font-size=\"11\">" << sci(fmax) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string populations_svg(std::span<const BandPopulations> pops, Enantiomer e)
{
    if (pops.empty())
        throw InvalidParameters("no populations to plot");
    const double W = 640, H = 300, left = 50, right = 20, top = 30, bottom = 30;
    const double t0 = pops.front().t, t1 = pops.back().t;
    const double span = t1 > t0 ? t1 - t0 : 1.0;
    auto x = [&](double t) { return left + (W - left - right) * (t - t0) / span; };
    auto y = [&](double p) { return top + (H - top - bottom) * (1.0 - p); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<text x=\"" << left << "\" y=\"18\" font-size=\"12\">band populations (" << to_char(e)
       << "): L black, M green, U orange</text>\n";
    auto poly = [&](auto member, const char* colour) {
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
        for (const auto& p : pops)
            os << x(p.t) << "," << y(member(p)) << " ";
        os << "\"/>\n";
    };
    poly([](const BandPopulations& p) { return p.L; }, "#000");
    poly([](const BandPopulations& p) { return p.M; }, "#2a9d8f");
    poly([](const BandPopulations& p) { return p.U; }, "#e76f51");
    os << "</svg>\n";
    return os.str();
}

} // namespace tfc::io
