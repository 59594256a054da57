// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails. Uses the bundled parameters throughout.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "tfc/dynamics.hpp"
#include "tfc/ensemble.hpp"
#include "tfc/errors.hpp"
#include "tfc/parallel.hpp"
#include "tfc/spectrum.hpp"
#include "tfc/topology.hpp"

using namespace tfc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;
bool chern_sums_vanish = true;

void report(int id, bool ok, const std::string& detail)
{
    std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
    if (!ok)
        ++failures;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::array<int, 3> chern_checked(const SimConfig& cfg, Enantiomer e, int N)
{
    const auto C = chern_numbers(cfg, e, N).C;
    if (C[0] + C[1] + C[2] != 0)
        chern_sums_vanish = false;
    return C;
}

void criterion_chern(const SimConfig& cfg)
{
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream detail;
    for (int N : {8, 40, 80}) {
        const auto R = chern_checked(cfg, Enantiomer::R, N);
        const auto S = chern_checked(cfg, Enantiomer::S, N);
        ok = ok && R == std::array<int, 3>{-2, 0, 2} && S == std::array<int, 3>{2, 0, -2};
        detail << "N=" << N << " R(" << R[0] << "," << R[1] << "," << R[2] << ") S(" << S[0] << "," << S[1]
               << "," << S[2] << ")  ";
    }
    const double sec = seconds_since(t0);
    report(1, ok && sec < 5.0, detail.str() + fmt("runtime %.2f s", sec));
}

void criterion_phase_diagram(const SimConfig& cfg)
{
    const auto t0 = Clock::now();
    const auto m_values = default_m_values();
    const auto d_values = default_delta_values(cfg);
    const unsigned workers = worker_count();
    bool ok = true;
    int boundary = 0, stray = 0, wrong = 0;
    for (Enantiomer e : {Enantiomer::R, Enantiomer::S}) {
        const auto cells = phase_diagram(cfg, m_values, d_values, e, cfg.grid, workers);
        const int sign = e == Enantiomer::R ? 1 : -1;
        for (std::size_t i = 0; i < m_values.size(); ++i) {
            for (std::size_t j = 0; j < d_values.size(); ++j) {
                const PhaseCell& c = cells[i * d_values.size() + j];
                const double m = c.m;
                const double near = std::min({std::abs(m + 2.0), std::abs(m), std::abs(m - 2.0)});
                if (c.boundary()) {
                    ++boundary;
                    if (near > 0.1 + 1e-12)
                        ++stray;
                    continue;
                }
                const auto& C = *c.chern;
                if (C[0] + C[1] + C[2] != 0)
                    chern_sums_vanish = false;
                if (std::abs(d_values[j]) > 0.0 || near < 1e-12)
                    continue;
                int expect = 0;
                if (m > -2.0 && m < 0.0)
                    expect = 2;
                else if (m > 0.0 && m < 2.0)
                    expect = -2;
                if (C[0] != sign * expect)
                    ++wrong;
            }
        }
    }
    ok = stray == 0 && wrong == 0;
    const double sec = seconds_since(t0);
    report(2, ok && sec < 120.0,
           fmt("%zu x %zu cells per enantiomer, %d boundary cells (%d away from m in {-2,0,2}), %d wrong C_L at "
               "delta = 0; runtime %.1f s on %u workers",
               m_values.size(), d_values.size(), boundary, stray, wrong, sec, workers));
}

bool response_shrinks(const SimConfig& cfg, std::string& detail)
{
    bool ok = true;
    for (TorusPoint p : {TorusPoint{1.0, 2.0}, TorusPoint{2.5, 0.7}}) {
        SimConfig slow = cfg;
        slow.drive.omega1 /= 10.0;
        slow.drive.omega2 /= 10.0;
        const ResponseCheck a = adiabatic_response_check(p, cfg, Enantiomer::R, L);
        const ResponseCheck b = adiabatic_response_check(p, slow, Enantiomer::R, L);
        const double ratio = a.residual / b.residual;
        ok = ok && !a.skipped && !b.skipped && ratio >= 10.0;
        detail += fmt(" residual ratio %.1f at (%.1f, %.1f);", ratio, p.theta1, p.theta2);
    }
    return ok;
}

bool static_properties(const SimConfig& cfg, std::string& detail)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    double dark = 0.0, spectral = 0.0;
    for (int k = 0; k < 100; ++k) {
        const TorusPoint p{u(rng), u(rng)};
        for (Enantiomer e : {Enantiomer::R, Enantiomer::S}) {
            const Matrix4 h4 = rotating_h4(p, cfg, e);
            const double scale = h4.norm();
            dark = std::max(dark, (h4 * dark_state()).norm() / scale);
            Eigen::SelfAdjointEigenSolver<Matrix4> s4(h4, Eigen::EigenvaluesOnly);
            Eigen::SelfAdjointEigenSolver<Matrix3> s3(effective_h3(p, cfg, e), Eigen::EigenvaluesOnly);
            // compare against every way of removing one h4 eigenvalue
            std::vector<double> ev(s4.eigenvalues().data(), s4.eigenvalues().data() + 4);
            double best = 1e300;
            for (int drop = 0; drop < 4; ++drop) {
                std::vector<double> rest;
                for (int i = 0; i < 4; ++i)
                    if (i != drop)
                        rest.push_back(ev[i]);
                double d = 0.0;
                for (int i = 0; i < 3; ++i)
                    d = std::max(d, std::abs(rest[i] - s3.eigenvalues()[i]));
                best = std::min(best, d);
            }
            spectral = std::max(spectral, best / s3.eigenvalues().cwiseAbs().maxCoeff());
        }
    }
    detail += fmt(" dark nullity %.1e, h3/h4 spectra %.1e;", dark, spectral);
    return dark <= 1e-14 && spectral <= 1e-12;
}

} // namespace

int main()
{
    const auto start = Clock::now();
    const SimConfig cfg = propanediol_config();
    std::cout << "acceptance run with the bundled propanediol parameters (" << worker_count() << " workers)"
              << std::endl;

    criterion_chern(cfg);
    criterion_phase_diagram(cfg);

    std::string props;
    const bool static_ok = static_properties(cfg, props);
    const bool response_ok = response_shrinks(cfg, props);

    // Full horizon with the preparation ramp for both enantiomers.
    const double period = cfg.omega2_period();
    EvolveOptions opt = evolve_options(cfg);
    opt.ramp = true;
    opt.initial = InitialState::Ground;
    opt.stride = 2000;
    opt.record_times = {377.0 * period, 1597.0 * period};
    const double t_start = -2.0 * std::numbers::pi / cfg.drive.omega_r;
    const double t_end = cfg.t_star();
    std::vector<Trajectory> runs(2);
    const std::array<Enantiomer, 2> species{Enantiomer::R, Enantiomer::S};
    const auto t_dyn = Clock::now();
    bool completed = true;
    std::string failure;
    try {
        parallel_for(2, worker_count(), [&](std::size_t k) { runs[k] = evolve(cfg, species[k], t_start, t_end, opt); });
    } catch (const std::exception& ex) {
        completed = false;
        failure = ex.what();
    }
    const double dyn_sec = seconds_since(t_dyn);

    if (!completed) {
        for (int id : {3, 4, 5})
            report(id, false, "dynamics did not complete: " + failure);
    } else {
        const PumpingReport r377 = pumping_rate(runs[0], cfg, Enantiomer::R, 377);
        const PumpingReport s377 = pumping_rate(runs[1], cfg, Enantiomer::S, 377);
        const PumpingReport rfull = pumping_rate(runs[0], cfg, Enantiomer::R, cfg.tstar_periods);
        const PumpingReport sfull = pumping_rate(runs[1], cfg, Enantiomer::S, cfg.tstar_periods);
        const bool ok3 = std::abs(r377.q + 2.0) <= 0.2 && std::abs(s377.q - 2.0) <= 0.2 &&
                         std::abs(r377.q + s377.q) <= 0.05 && std::abs(rfull.q + 2.0) <= 0.1 &&
                         std::abs(sfull.q - 2.0) <= 0.1;
        report(3, ok3,
               fmt("q(377) R %.4f S %.4f sum %.4f; q(%g) R %.4f S %.4f; runtime %.0f s", r377.q, s377.q,
                   r377.q + s377.q, cfg.tstar_periods, rfull.q, sfull.q, dyn_sec));

        double popL[2], dark_max = 0.0;
        for (int k = 0; k < 2; ++k) {
            const auto pops = band_populations(runs[k], cfg, species[k]);
            popL[k] = 0.0;
            for (std::size_t i = 0; i < pops.size(); ++i) {
                dark_max = std::max(dark_max, pops[i].dark);
                if (runs[k].samples[i].t == 0.0)
                    popL[k] = pops[i].L;
            }
        }
        report(4, popL[0] >= 0.99 && popL[1] >= 0.99 && dark_max <= 1e-10,
               fmt("lower-band population at t = 0: R %.4f S %.4f; max dark population %.1e", popL[0], popL[1],
                   dark_max));

        const SidebandSpectrum specR = sideband_powers(runs[0], cfg, Enantiomer::R, 377);
        const SidebandSpectrum specS = sideband_powers(runs[1], cfg, Enantiomer::S, 377);
        const double qsR = chern_from_spectrum(specR.lines, cfg.drive).q21();
        const double qsS = chern_from_spectrum(specS.lines, cfg.drive).q21();
        const bool frames = std::abs(qsR - r377.q) <= 0.05 * std::abs(r377.q) &&
                            std::abs(qsS - s377.q) <= 0.05 * std::abs(s377.q);
        double asym = 0.0;
        for (const DifferenceRow& row : difference_spectrum(specR.lines, specS.lines))
            asym = std::max(asym, std::abs(row.P_R + row.P_S) / std::max(std::abs(row.P_R), std::abs(row.P_S)));
        report(5, frames && asym <= 0.01,
               fmt("spectral q R %.4f (dynamics %.4f) S %.4f (dynamics %.4f); worst line |P_R + P_S| / |P| = %.3f",
                   qsR, r377.q, qsS, s377.q, asym));

        const double drift = std::max(runs[0].max_norm_error, runs[1].max_norm_error);
        props = fmt(" norm drift %.1e;", drift) + props;
        report(6, drift <= 1e-9 && static_ok && response_ok && chern_sums_vanish,
               props + (chern_sums_vanish ? " all Chern sums vanish" : " a Chern sum is non-zero"));

        const double excess = 1.0e8;
        const EnsembleSignal racemic = ensemble_pumping({5.0e13, 5.0e13}, -2, cfg.drive);
        const EnsembleSignal signal = ensemble_pumping({excess, 0.0}, -2, cfg.drive);
        const double formula = cfg.drive.omega1 * cfg.drive.omega2 * -2.0 / (2.0 * std::numbers::pi) * excess;
        const bool exact = racemic.power == 0.0 &&
                           std::abs(signal.power - formula) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                                std::abs(formula);
        const SidebandSpectrum full = sideband_powers(runs[0], cfg, Enantiomer::R, cfg.tstar_periods);
        const ShotNoiseEstimate noise = shot_noise_limit({excess, 0.0, 1.0e-4, cfg.t_star()}, cfg.drive,
                                                         cfg.drive.Omega21(cfg.molecule), full.lines);
        auto decade = [](double x, double anchor) { return std::abs(std::log10(x / anchor)) <= 1.0; };
        const bool anchors = decade(noise.noise, 1e9) && decade(noise.per_molecule_photons, 100.0) &&
                             decade(noise.threshold, 1e7) && decade(noise.ee_limit_percent, 1e-6);
        report(7, exact && anchors,
               fmt("racemic %g, formula rel. error %.1e; sqrt(N) %.2e, photons per molecule %.3g, threshold "
                   "%.2e molecules, EE limit %.1e %%",
                   racemic.power + 0.0, std::abs(signal.power - formula) / std::abs(formula), noise.noise,
                   noise.per_molecule_photons, noise.threshold, noise.ee_limit_percent));
    }
    if (!completed)
        report(6, false, "norm drift unavailable;" + props);

    std::cout << fmt("total runtime %.0f s, %d of 7 criteria failed", seconds_since(start), failures) << std::endl;
    return failures == 0 ? 0 : 1;
}
