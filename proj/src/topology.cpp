#include "tfc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "tfc/errors.hpp"
#include "tfc/parallel.hpp"

namespace tfc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double kDegenerateRelative = 1.0e-6;
constexpr double kLinkFloor = 1.0e-9;
constexpr double kFluxMargin = 1.0e-9;

void fix_gauge(Matrix3& v)
{
    for (int c = 0; c < 3; ++c) {
        int best = 0;
        for (int r = 1; r < 3; ++r)
            if (std::abs(v(r, c)) > std::abs(v(best, c)))
                best = r;
        const cplx a = v(best, c);
        v.col(c) *= std::conj(a) / std::abs(a);
        v(best, c) = std::abs(v(best, c));
    }
}

TorusPoint grid_point(int i, int j, int N)
{
    return {two_pi * i / N, two_pi * j / N};
}

} // namespace

BandDecomposition decompose(const Matrix3& h)
{
    Eigen::SelfAdjointEigenSolver<Matrix3> es(h);
    BandDecomposition out;
    for (int k = 0; k < 3; ++k)
        out.energies[k] = es.eigenvalues()[k];
    out.vectors = es.eigenvectors();
    fix_gauge(out.vectors);
    out.gap = std::min(out.energies[1] - out.energies[0], out.energies[2] - out.energies[1]);
    const double radius = std::max(std::abs(out.energies[0]), std::abs(out.energies[2]));
    out.near_degenerate = out.gap <= kDegenerateRelative * radius || radius == 0.0;
    return out;
}

BandDecomposition band_decomposition(TorusPoint p, const SimConfig& cfg, Enantiomer e)
{
    return decompose(effective_h3(p, cfg, e));
}

std::size_t BandData::index(int i, int j) const noexcept
{
    const int ii = ((i % N) + N) % N;
    const int jj = ((j % N) + N) % N;
    return static_cast<std::size_t>(ii) * N + jj;
}

std::vector<double> BandData::band_curvature(int band) const
{
    std::vector<double> out(curvature.size());
    for (std::size_t k = 0; k < curvature.size(); ++k)
        out[k] = curvature[k][band];
    return out;
}

BandData compute_band_data(const SimConfig& cfg, Enantiomer e, int N)
{
    if (N < 8)
        throw InvalidParameters("torus grid must have N >= 8");

    BandData data;
    data.N = N;
    const std::size_t nodes = static_cast<std::size_t>(N) * N;
    data.energies.resize(nodes);
    data.vectors.resize(nodes);
    data.curvature.resize(nodes);

    double scale = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const BandDecomposition bd = band_decomposition(grid_point(i, j, N), cfg, e);
            const std::size_t k = data.index(i, j);
            data.energies[k] = bd.energies;
            data.vectors[k] = bd.vectors;
            min_gap = std::min(min_gap, bd.gap);
            scale = std::max({scale, std::abs(bd.energies[0]), std::abs(bd.energies[2])});
        }
    }
    data.min_gap = min_gap;

    auto closing = [&](const char* why, int i, int j) {
        std::ostringstream os;
        const TorusPoint p = grid_point(i, j, N);
        os << "gap closing (" << why << ") at theta = (" << p.theta1 << ", " << p.theta2 << ")";
        throw GapClosing(os.str(), p);
    };

    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const auto& en = data.energies[data.index(i, j)];
            const double gap = std::min(en[1] - en[0], en[2] - en[1]);
            if (scale == 0.0 || gap <= kDegenerateRelative * scale)
                closing("degenerate spectrum", i, j);
        }

    std::array<double, 3> total{};
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const Matrix3& v00 = data.vectors[data.index(i, j)];
            const Matrix3& v10 = data.vectors[data.index(i + 1, j)];
            const Matrix3& v11 = data.vectors[data.index(i + 1, j + 1)];
            const Matrix3& v01 = data.vectors[data.index(i, j + 1)];
            for (int b = 0; b < 3; ++b) {
                const cplx links[4] = {
                    v00.col(b).dot(v10.col(b)),
                    v10.col(b).dot(v11.col(b)),
                    v11.col(b).dot(v01.col(b)),
                    v01.col(b).dot(v00.col(b)),
                };
                cplx loop = 1.0;
                for (const cplx& u : links) {
                    const double mag = std::abs(u);
                    if (mag < kLinkFloor)
                        closing("vanishing link overlap", i, j);
                    loop *= u / mag;
                }
                // The counter-clockwise loop phase is minus the flux of
                // F = i<d1 u|d2 u> + c.c.
                const double flux = -std::arg(loop);
                if (std::abs(flux) >= std::numbers::pi - kFluxMargin)
                    closing("plaquette flux at pi", i, j);
                data.curvature[data.index(i, j)][b] = flux;
                total[b] += flux;
            }
        }
    }

    for (int b = 0; b < 3; ++b) {
        const double c = total[b] / two_pi;
        data.chern[b] = static_cast<int>(std::lround(c));
        if (std::abs(c - data.chern[b]) > 1.0e-6)
            throw IntegratorFailure("lattice Chern sum is not an integer");
    }
    return data;
}

ChernResult chern_numbers(const SimConfig& cfg, Enantiomer e, int N)
{
    const BandData data = compute_band_data(cfg, e, N);
    return {data.chern, data.min_gap};
}

int expected_chern(double m, int ks_sign)
{
    if (ks_sign != 1 && ks_sign != -1)
        throw InvalidParameters("ks_sign must be +1 or -1");
    const double a = std::abs(m);
    if (a <= 1.0e-9 || std::abs(a - 2.0) <= 1.0e-9)
        throw InvalidParameters("m lies on a phase boundary (|m| = 0 or 2)");
    if (a > 2.0)
        return 0;
    return -2 * (m > 0.0 ? 1 : -1) * ks_sign;
}

std::vector<PhaseCell> phase_diagram(const SimConfig& templ, std::span<const double> m_values,
                                     std::span<const double> delta_values, Enantiomer e, int N, unsigned workers)
{
    if (m_values.empty() || delta_values.empty())
        throw InvalidParameters("phase diagram needs at least one m and one delta value");

    const std::size_t nd = delta_values.size();
    std::vector<PhaseCell> cells(m_values.size() * nd);
    parallel_for(cells.size(), workers, [&](std::size_t k) {
        SimConfig cfg = templ;
        cfg.drive.m = m_values[k / nd];
        cfg.drive.delta = delta_values[k % nd];
        PhaseCell& cell = cells[k];
        cell.m = cfg.drive.m;
        cell.delta = cfg.drive.delta;
        try {
            const ChernResult r = chern_numbers(cfg, e, N);
            cell.chern = r.C;
            cell.min_gap = r.min_gap;
        } catch (const GapClosing&) {
            cell.chern.reset();
            cell.min_gap = 0.0;
        }
    });
    return cells;
}

std::vector<double> default_m_values()
{
    std::vector<double> v(61);
    for (int k = 0; k < 61; ++k)
        v[k] = -3.0 + 0.1 * k;
    // keep the boundaries exact despite the 0.1 step
    for (double& x : v)
        x = std::round(x * 10.0) / 10.0;
    return v;
}

std::vector<double> default_delta_values(const SimConfig& cfg)
{
    const auto c = coupling_energies(cfg.molecule, cfg.drive);
    const double g = *std::min_element(c.begin(), c.end());
    std::vector<double> v(21);
    for (int k = 0; k < 21; ++k)
        v[k] = g * (k - 10) / 10.0;
    return v;
}

double torus_average(std::span<const double> samples)
{
    if (samples.empty())
        throw InvalidParameters("torus average of an empty grid");
    return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double berry_curvature_fd(TorusPoint p, const SimConfig& cfg, Enantiomer e, int band, double h)
{
    auto vec = [&](double t1, double t2) -> State3 {
        return band_decomposition({t1, t2}, cfg, e).vectors.col(band);
    };
    const State3 d1 = (vec(p.theta1 + h, p.theta2) - vec(p.theta1 - h, p.theta2)) / (2.0 * h);
    const State3 d2 = (vec(p.theta1, p.theta2 + h) - vec(p.theta1, p.theta2 - h)) / (2.0 * h);
    return -2.0 * d1.dot(d2).imag();
}

std::array<double, 2> band_energy_gradient(TorusPoint p, const SimConfig& cfg, Enantiomer e, int band, double h)
{
    auto en = [&](double t1, double t2) { return band_decomposition({t1, t2}, cfg, e).energies[band]; };
    return {
        (en(p.theta1 + h, p.theta2) - en(p.theta1 - h, p.theta2)) / (2.0 * h),
        (en(p.theta1, p.theta2 + h) - en(p.theta1, p.theta2 - h)) / (2.0 * h),
    };
}

} // namespace tfc
