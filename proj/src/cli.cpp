#include "tfc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tfc/config.hpp"
#include "tfc/dynamics.hpp"
#include "tfc/ensemble.hpp"
#include "tfc/errors.hpp"
#include "tfc/io.hpp"
#include "tfc/parallel.hpp"
#include "tfc/spectrum.hpp"
#include "tfc/topology.hpp"

namespace tfc::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct GlobalOptions
{
    std::string config;
    std::string out = "out";
    std::string enantiomer;
    std::optional<int> grid;
    std::optional<double> tstar_periods;
    std::optional<double> dt;
    std::optional<double> m;
    std::optional<double> delta;
    bool plot = false;
};

struct PhaseOptions
{
    double m_min = -3.0;
    double m_max = 3.0;
    int m_count = 61;
    std::optional<double> delta_max;
    int delta_count = 21;
};

struct DynamicsOptions
{
    std::string ramp;
    std::optional<int> stride;
    std::optional<double> window;
};

struct EnsembleOptions
{
    double nr = 0.0;
    double ns = 0.0;
    double area = 1.0e-4;
    std::string spectrum_csv;
};

class Run
{
public:
    Run(std::string command, const GlobalOptions& g, std::vector<std::string> argv)
        : command_(std::move(command)), g_(g), argv_(std::move(argv)), start_(std::chrono::steady_clock::now())
    {
    }

    SimConfig load()
    {
        if (!g_.config.empty()) {
            cfg_ = load_config(g_.config);
            config_source_ = g_.config;
        } else {
            cfg_ = propanediol_config();
            config_source_ = "built-in propanediol data set";
        }
        if (!g_.enantiomer.empty())
            cfg_.enantiomers = parse_enantiomer_selection(g_.enantiomer);
        if (g_.grid)
            cfg_.grid = *g_.grid;
        if (g_.tstar_periods)
            cfg_.tstar_periods = *g_.tstar_periods;
        if (g_.dt)
            cfg_.dt = *g_.dt;
        if (g_.m)
            cfg_.drive.m = *g_.m;
        if (g_.delta)
            cfg_.drive.delta = *g_.delta;
        return cfg_;
    }

    void validate(std::ostream& err)
    {
        const ValidationReport report = validate_config(cfg_);
        for (const Violation& v : report.violations) {
            const std::string line = std::string(v.severity == Severity::Error ? "error" : "warning") + " [" +
                                     std::string(check_name(v.check)) + "] " + v.message;
            if (v.severity == Severity::Warning) {
                warnings_.push_back(line);
                err << line << "\n";
            }
        }
        if (!report.ok())
            throw ConfigError("configuration failed validation:\n" + report.describe());
    }

    fs::path output(const std::string& name)
    {
        const fs::path p = fs::path(g_.out) / name;
        outputs_.push_back(name);
        return p;
    }

    void warn(const std::string& w, std::ostream& err)
    {
        if (std::find(warnings_.begin(), warnings_.end(), w) != warnings_.end())
            return;
        warnings_.push_back(w);
        err << "warning: " << w << "\n";
    }

    ordered_json& results() { return results_; }
    void add_steps(std::size_t n) { steps_ += n; }
    const SimConfig& cfg() const { return cfg_; }
    const GlobalOptions& globals() const { return g_; }

    void write_manifest()
    {
        ordered_json j;
        j["tool"] = kToolName;
        j["version"] = kToolVersion;
        j["subcommand"] = command_;
        j["argv"] = argv_;
        j["config_source"] = config_source_;
        j["config"] = format_config(cfg_);
        j["threads"] = worker_count();
        j["outputs"] = outputs_;
        j["integrator_steps"] = steps_;
        j["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        j["warnings"] = warnings_;
        j["results"] = results_;
        io::write_text(fs::path(g_.out) / "manifest.json", j.dump(2) + "\n");
    }

private:
    std::string command_;
    GlobalOptions g_;
    std::vector<std::string> argv_;
    std::chrono::steady_clock::time_point start_;
    SimConfig cfg_;
    std::string config_source_;
    std::vector<std::string> outputs_;
    std::vector<std::string> warnings_;
    std::size_t steps_ = 0;
    ordered_json results_ = ordered_json::object();
};

std::string fixed(double x, int digits = 6)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << x;
    return os.str();
}

// ---------------------------------------------------------------------------

int cmd_chern(Run& run, std::ostream& out, std::ostream& err)
{
    SimConfig cfg = run.load();
    run.validate(err);

    struct Row
    {
        Enantiomer e;
        ChernResult r;
    };
    std::vector<Row> rows(cfg.enantiomers.size());
    parallel_for(rows.size(), worker_count(), [&](std::size_t k) {
        rows[k] = {cfg.enantiomers[k], chern_numbers(cfg, cfg.enantiomers[k], cfg.grid)};
    });

    io::CsvTable table({"enantiomer", "m", "delta", "grid", "C_L", "C_M", "C_U", "min_gap"});
    for (const Row& row : rows) {
        const auto& C = row.r.C;
        table.add_row({std::string(1, to_char(row.e)), io::number(cfg.drive.m), io::number(cfg.drive.delta),
                       std::to_string(cfg.grid), std::to_string(C[0]), std::to_string(C[1]), std::to_string(C[2]),
                       io::number(row.r.min_gap)});
        out << to_char(row.e) << ": C_L = " << C[0] << "  C_M = " << C[1] << "  C_U = " << C[2]
            << "  (min gap " << row.r.min_gap << " a.u.)\n";
        run.results()[std::string(1, to_char(row.e))] = {{"C", C}, {"min_gap", row.r.min_gap}};
    }
    table.write(run.output("chern.csv"));
    run.write_manifest();
    return Success;
}

int cmd_phase_diagram(Run& run, const PhaseOptions& po, std::ostream& out, std::ostream& err)
{
    SimConfig cfg = run.load();
    run.validate(err);
    if (po.m_count < 1 || po.delta_count < 1)
        throw ConfigError("sweep counts must be positive");

    // A count of one pins that axis to the configured value.
    auto linspace = [](double lo, double hi, int n) {
        std::vector<double> v;
        for (int k = 0; k < n; ++k)
            v.push_back(lo + (hi - lo) * k / (n - 1));
        return v;
    };
    std::vector<double> m_values;
    if (po.m_count == 1)
        m_values = {cfg.drive.m};
    else if (po.m_min == -3.0 && po.m_max == 3.0 && po.m_count == 61)
        m_values = default_m_values();
    else
        m_values = linspace(po.m_min, po.m_max, po.m_count);

    std::vector<double> delta_values;
    if (po.delta_count == 1) {
        delta_values = {cfg.drive.delta};
    } else if (po.delta_max) {
        delta_values = linspace(-*po.delta_max, *po.delta_max, po.delta_count);
    } else if (po.delta_count == 21) {
        delta_values = default_delta_values(cfg);
    } else {
        const auto c = coupling_energies(cfg.molecule, cfg.drive);
        const double g = *std::min_element(c.begin(), c.end());
        delta_values = linspace(-g, g, po.delta_count);
    }

    const unsigned workers = worker_count();
    for (Enantiomer e : cfg.enantiomers) {
        const auto cells = phase_diagram(cfg, m_values, delta_values, e, cfg.grid, workers);
        const std::string tag(1, to_char(e));
        io::phase_diagram_table(cells).write(run.output("phase_diagram_" + tag + ".csv"));
        if (run.globals().plot)
            io::write_text(run.output("phase_diagram_" + tag + ".svg"),
                           io::phase_diagram_svg(cells, m_values, delta_values, e));
        std::size_t boundary = 0;
        for (const auto& c : cells)
            boundary += c.boundary() ? 1 : 0;
        out << tag << ": " << cells.size() << " cells, " << boundary << " gap-closing cells\n";
        run.results()[tag] = {{"cells", cells.size()}, {"boundary_cells", boundary}};
    }
    run.write_manifest();
    return Success;
}

struct Simulation
{
    std::vector<Trajectory> trajectories;
    std::vector<int> windows; ///< Fibonacci windows inside the horizon
};

Simulation simulate(Run& run, const SimConfig& cfg, const DynamicsOptions& dopt)
{
    EvolveOptions opt = evolve_options(cfg);
    if (!dopt.ramp.empty()) {
        const std::string r = dopt.ramp;
        if (r == "on")
            opt.ramp = true;
        else if (r == "off")
            opt.ramp = false;
        else
            throw ConfigError("--ramp must be on or off");
    }
    if (dopt.stride)
        opt.stride = *dopt.stride;
    opt.initial = opt.ramp ? InitialState::Ground : InitialState::LowerBand;

    const double period = cfg.omega2_period();
    if (!(cfg.tstar_periods >= 1.0))
        throw ConfigError("tstar_periods must be at least 1");
    Simulation sim;
    sim.windows = fibonacci_between(1, static_cast<int>(std::floor(cfg.tstar_periods)));
    for (int w : sim.windows)
        opt.record_times.push_back(w * period);
    if (dopt.window)
        opt.record_times.push_back(*dopt.window * period);

    const double t_start = opt.ramp ? -2.0 * std::numbers::pi / cfg.drive.omega_r : 0.0;
    const double t_end = cfg.tstar_periods * period;
    sim.trajectories.resize(cfg.enantiomers.size());
    parallel_for(sim.trajectories.size(), worker_count(), [&](std::size_t k) {
        sim.trajectories[k] = evolve(cfg, cfg.enantiomers[k], t_start, t_end, opt);
    });
    for (const auto& tr : sim.trajectories)
        run.add_steps(tr.steps);
    return sim;
}

int cmd_dynamics(Run& run, const DynamicsOptions& dopt, std::ostream& out, std::ostream& err)
{
    SimConfig cfg = run.load();
    run.validate(err);
    const Simulation sim = simulate(run, cfg, dopt);
    const double headline = dopt.window ? *dopt.window : cfg.tstar_periods;

    for (const Trajectory& tr : sim.trajectories) {
        const Enantiomer e = tr.enantiomer;
        const std::string tag(1, to_char(e));
        io::trajectory_table(tr, cfg, e).write(run.output("trajectory_" + tag + ".csv"));

        io::CsvTable pump({"window_periods", "P_w1_au", "P_w2_au", "P_21_au", "q"});
        std::vector<double> windows(sim.windows.begin(), sim.windows.end());
        if (std::find(windows.begin(), windows.end(), headline) == windows.end())
            windows.push_back(headline);
        std::sort(windows.begin(), windows.end());
        for (double w : windows) {
            const PumpingReport r = pumping_rate(tr, cfg, e, w);
            pump.add_row({io::number(r.window_periods), io::number(r.P1), io::number(r.P2), io::number(r.P21),
                          io::number(r.q)});
        }
        pump.write(run.output("pumping_" + tag + ".csv"));

        const PumpingReport r = pumping_rate(tr, cfg, e, headline);
        const auto pops = band_populations(tr, cfg, e);
        double dark_max = 0.0;
        for (const auto& p : pops)
            dark_max = std::max(dark_max, p.dark);
        const BandPopulations at0 = populations_at(tr.nearest(0.0), cfg, e);
        if (run.globals().plot)
            io::write_text(run.output("populations_" + tag + ".svg"), io::populations_svg(pops, e));

        out << tag << ": q = " << fixed(r.q, 4) << " over " << fixed(r.window_periods, 1)
            << " omega2 periods (P_w1 = " << r.P1 << ", P_w2 = " << r.P2 << " a.u.); lower-band population at t=0 "
            << fixed(at0.L, 6) << "; max dark population " << dark_max << "; max norm error " << tr.max_norm_error
            << "\n";
        run.results()[tag] = {{"q", r.q},
                              {"P_w1", r.P1},
                              {"P_w2", r.P2},
                              {"P_21", r.P21},
                              {"window_periods", r.window_periods},
                              {"pop_L_t0", at0.L},
                              {"max_dark_population", dark_max},
                              {"max_norm_error", tr.max_norm_error},
                              {"steps", tr.steps}};
    }
    run.write_manifest();
    return Success;
}

std::vector<SidebandSpectrum> spectra_of(Run& run, const Simulation& sim, const SimConfig& cfg, double window,
                                         std::ostream& err)
{
    std::vector<SidebandSpectrum> out;
    for (const Trajectory& tr : sim.trajectories) {
        out.push_back(sideband_powers(tr, cfg, tr.enantiomer, window));
        for (const auto& w : out.back().warnings)
            run.warn(w, err);
    }
    return out;
}

int cmd_spectrum(Run& run, const DynamicsOptions& dopt, std::ostream& out, std::ostream& err)
{
    SimConfig cfg = run.load();
    run.validate(err);
    const Simulation sim = simulate(run, cfg, dopt);
    const double window = dopt.window ? *dopt.window : cfg.tstar_periods;
    const auto spectra = spectra_of(run, sim, cfg, window, err);

    std::span<const SidebandLine> R, S;
    for (const auto& s : spectra) {
        const std::string tag(1, to_char(s.enantiomer));
        (s.enantiomer == Enantiomer::R ? R : S) = s.lines;
        const SpectralChern q = chern_from_spectrum(s.lines, cfg.drive);
        const PumpingReport p =
            pumping_rate(sim.trajectories[&s - spectra.data()], cfg, s.enantiomer, window);
        out << tag << ": spectral (q1, q2) = (" << fixed(q.q1, 4) << ", " << fixed(q.q2, 4)
            << "), (q2 - q1)/2 = " << fixed(q.q21(), 4) << ", dynamics q = " << fixed(p.q, 4) << "\n";
        ordered_json lines = ordered_json::array();
        for (const auto& l : s.lines)
            lines.push_back({{"carrier", l.carrier()},
                             {"sideband", l.sideband()},
                             {"frequency_au", l.frequency},
                             {"power_au", l.power},
                             {"intensity_W_per_m2", power_to_intensity_si(l.power)}});
        run.results()[tag] = {{"q1", q.q1},
                              {"q2", q.q2},
                              {"q_spectral", q.q21()},
                              {"q_dynamics", p.q},
                              {"window_periods", s.window_periods},
                              {"lines", lines}};
    }
    io::spectrum_table(R, S).write(run.output("spectrum.csv"));
    if (run.globals().plot)
        io::write_text(run.output("spectrum.svg"), io::spectrum_svg(R, S));
    run.write_manifest();
    return Success;
}

std::vector<SidebandLine> read_spectrum_csv(const std::string& path, const SimConfig& cfg)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read spectrum file " + path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("carrier,sideband,frequency_au,P_av_R_au", 0) != 0)
        throw ConfigError(path + " does not contain an R sideband spectrum");
    std::vector<SidebandLine> lines;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() < 4)
            throw ConfigError("malformed row in " + path);
        bool matched = false;
        for (const LineSpec& spec : kSidebandLines)
            if (carrier_label(spec.carrier) == cells[0] && sideband_label(spec) == cells[1]) {
                SidebandLine l;
                l.spec = spec;
                l.frequency = std::stod(cells[2]);
                l.power = std::stod(cells[3]);
                l.photon_rate = l.power / l.frequency;
                if (std::abs(l.frequency - line_frequency(spec, cfg)) > 1.0e-12 * l.frequency)
                    throw ConfigError(path + " was produced with a different drive configuration");
                lines.push_back(l);
                matched = true;
            }
        if (!matched)
            throw ConfigError("unknown sideband " + cells[0] + cells[1] + " in " + path);
    }
    return lines;
}

int cmd_ensemble(Run& run, const DynamicsOptions& dopt, const EnsembleOptions& eo, std::ostream& out,
                 std::ostream& err)
{
    SimConfig cfg = run.load();
    run.validate(err);
    if (eo.nr < 0.0 || eo.ns < 0.0)
        throw ConfigError("molecule counts must be non-negative");

    const ChernResult chern = chern_numbers(cfg, Enantiomer::R, cfg.grid);
    EnsembleSpec spec{eo.nr, eo.ns, eo.area, cfg.t_star()};
    const EnsembleSignal signal = ensemble_pumping(spec, chern.C[0], cfg.drive);

    std::vector<SidebandLine> lines;
    if (!eo.spectrum_csv.empty()) {
        lines = read_spectrum_csv(eo.spectrum_csv, cfg);
    } else {
        SimConfig rcfg = cfg;
        rcfg.enantiomers = {Enantiomer::R};
        const Simulation sim = simulate(run, rcfg, dopt);
        lines = spectra_of(run, sim, rcfg, rcfg.tstar_periods, err).front().lines;
    }
    const ShotNoiseEstimate noise = shot_noise_limit(spec, cfg.drive, cfg.drive.Omega21(cfg.molecule), lines);
    const double excess = eo.nr - eo.ns;
    const bool detectable = excess != 0.0 && noise.detectable(excess);

    io::CsvTable t({"quantity", "value"});
    auto add = [&](const std::string& k, double v) { t.add_row({k, io::number(v)}); };
    add("N_R", eo.nr);
    add("N_S", eo.ns);
    add("beam_area_m2", eo.area);
    add("t_star_au", spec.t_star);
    add("C_L_R", chern.C[0]);
    add("pumping_power_au", signal.power);
    add("enantiomeric_excess", signal.ee);
    add("chirality", signal.chirality);
    add("estimate_photon_count", noise.photon_count);
    add("estimate_shot_noise", noise.noise);
    add("estimate_photons_per_molecule", noise.per_molecule_photons);
    add("estimate_threshold_molecules", noise.threshold);
    add("estimate_ee_limit_percent", noise.ee_limit_percent);
    add("detectable", detectable ? 1.0 : 0.0);
    t.write(run.output("ensemble.csv"));

    out << "inputs: N_R = " << eo.nr << ", N_S = " << eo.ns << ", beam area = " << eo.area
        << " m^2, t* = " << spec.t_star << " a.u., C_L^R = " << chern.C[0] << "\n"
        << "pumping power P_2->1 = " << signal.power << " a.u. (EE = " << signal.ee << ", chirality "
        << signal.chirality << ")\n"
        << "estimate: photon count N = " << noise.photon_count << ", sqrt(N) = " << noise.noise << "\n"
        << "estimate: photons per molecule per t* = " << noise.per_molecule_photons << "\n"
        << "estimate: threshold = " << noise.threshold << " molecules, EE limit = " << noise.ee_limit_percent
        << " % of 1 mL at 1 uM\n"
        << "verdict: " << (detectable ? "above" : "below") << " threshold\n";
    run.results() = {{"C_L_R", chern.C[0]},
                     {"pumping_power_au", signal.power},
                     {"ee", signal.ee},
                     {"chirality", signal.chirality},
                     {"estimate_photon_count", noise.photon_count},
                     {"estimate_shot_noise", noise.noise},
                     {"estimate_photons_per_molecule", noise.per_molecule_photons},
                     {"estimate_threshold_molecules", noise.threshold},
                     {"estimate_ee_limit_percent", noise.ee_limit_percent},
                     {"detectable", detectable}};
    run.write_manifest();
    return Success;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Enantioselective topological frequency conversion simulator", kToolName};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--config", g.config, "Configuration file (default: built-in propanediol data set)");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--enantiomer", g.enantiomer, "R, S or both")->check(CLI::IsMember({"R", "S", "both"}));
    app.add_option("--grid", g.grid, "Torus grid size N")->check(CLI::PositiveNumber);
    app.add_option("--tstar-periods", g.tstar_periods, "Simulation horizon in omega2 periods");
    app.add_option("--dt", g.dt, "Integrator step (a.u.)");
    app.add_option("--m", g.m, "Override the mass-like offset m");
    app.add_option("--delta", g.delta, "Override the detuning delta (a.u.)");
    app.add_flag("--plot", g.plot, "Also write SVG plots");

    auto* chern = app.add_subcommand("chern", "Chern numbers of the three adiabatic bands");
    auto* phase = app.add_subcommand("phase-diagram", "C_L over an (m, delta) sweep");
    PhaseOptions po;
    phase->add_option("--m-min", po.m_min, "Lower end of the m sweep")->capture_default_str();
    phase->add_option("--m-max", po.m_max, "Upper end of the m sweep")->capture_default_str();
    phase->add_option("--m-count", po.m_count, "Number of m values (1 pins m to the configured value)")->capture_default_str();
    phase->add_option("--delta-max", po.delta_max, "Sweep delta over [-d, d] (default: weakest coupling)");
    phase->add_option("--delta-count", po.delta_count, "Number of delta values (1 pins delta to the configured value)")->capture_default_str();

    DynamicsOptions dopt;
    auto add_dyn = [&](CLI::App* sub) {
        sub->add_option("--ramp", dopt.ramp, "on: adiabatic preparation from |1,0>; off: start in the lower band at t=0")
            ->check(CLI::IsMember({"on", "off"}));
        sub->add_option("--stride", dopt.stride, "Trajectory downsampling stride");
        sub->add_option("--window", dopt.window, "Averaging window in omega2 periods (default: full horizon)");
    };
    auto* dyn = app.add_subcommand("dynamics", "Driven evolution, band populations and pumping rate");
    add_dyn(dyn);
    auto* spec = app.add_subcommand("spectrum", "Sideband power spectrum and R - S difference");
    add_dyn(spec);
    auto* ens = app.add_subcommand("ensemble", "Ensemble signal and shot-noise detection estimate");
    add_dyn(ens);
    EnsembleOptions eo;
    ens->add_option("--nr", eo.nr, "Number of R molecules")->required();
    ens->add_option("--ns", eo.ns, "Number of S molecules")->required();
    ens->add_option("--area", eo.area, "Beam area in m^2")->capture_default_str();
    ens->add_option("--spectrum", eo.spectrum_csv, "Reuse an R sideband spectrum CSV instead of simulating");

    for (auto* sub : {chern, phase, dyn, spec, ens})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return Success;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return Success;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return ConfigFailure;
    }

    std::vector<std::string> args(argv, argv + argc);
    try {
        if (chern->parsed()) {
            Run r("chern", g, args);
            return cmd_chern(r, out, err);
        }
        if (phase->parsed()) {
            Run r("phase-diagram", g, args);
            return cmd_phase_diagram(r, po, out, err);
        }
        if (dyn->parsed()) {
            Run r("dynamics", g, args);
            return cmd_dynamics(r, dopt, out, err);
        }
        if (spec->parsed()) {
            Run r("spectrum", g, args);
            return cmd_spectrum(r, dopt, out, err);
        }
        Run r("ensemble", g, args);
        return cmd_ensemble(r, dopt, eo, out, err);
    } catch (const GapClosing& e) {
        err << "gap closing: " << e.what() << "\n";
        return GapClosingFailure;
    } catch (const IntegratorFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return NumericalFailure;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const InvalidParameters& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const DegenerateCycle& e) {
        err << "degenerate cycle: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return NumericalFailure;
    }
}

} // namespace tfc::cli
