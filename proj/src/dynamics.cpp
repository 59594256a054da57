#include "tfc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tfc/errors.hpp"
#include "tfc/topology.hpp"

namespace tfc {

namespace {

using namespace std::complex_literals;

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double kNormTolerance = 1.0e-9;
constexpr double kMaxPhasePerStep = 0.5;
const double kGaussLow = 0.5 - std::sqrt(3.0) / 6.0;
const double kGaussHigh = 0.5 + std::sqrt(3.0) / 6.0;

// Neumaier-compensated running sum; the accumulators add ~1e8 terms.
struct CompensatedSum
{
    double sum = 0.0;
    double carry = 0.0;

    void add(double x)
    {
        const double s = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - s) + x : (x - s) + sum;
        sum = s;
    }
    double value() const { return sum + carry; }
};

struct ComplexSum
{
    CompensatedSum re;
    CompensatedSum im;

    void add(cplx z)
    {
        re.add(z.real());
        im.add(z.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

struct Coherences
{
    cplx r21; ///< sum_M psi_{2M}^* psi_1
    cplx r32; ///< sum_M psi_3^* psi_{2M}
    cplx r31; ///< psi_3^* psi_1
};

Coherences coherences(const State4& psi)
{
    using namespace basis;
    const cplx bright = psi[plus] + psi[minus];
    return {std::conj(bright) * psi[g], std::conj(psi[top]) * bright, std::conj(psi[top]) * psi[g]};
}

// Off-diagonal (coupling) elements of rotating_h4 for unit envelopes.
struct CouplingFactors
{
    cplx a21;
    cplx a32;
    cplx a31;
};

CouplingFactors coupling_factors(const DipoleTable& mu)
{
    return {-(1i * mu.mu_21) / 2.0, -mu.mu_32 / 2.0, -mu.mu_31 / 2.0};
}

// <psi| H_coupling(env) |psi> using the coherences.
double coupling_expectation(const Envelopes& env, const CouplingFactors& a, const Coherences& c)
{
    return 2.0 * (a.a21 * env.e21 * c.r21 + a.a32 * env.e32 * c.r32 + a.a31 * env.e31 * c.r31).real();
}

cplx line_coherence(const LineSpec& line, const Coherences& c)
{
    switch (line.carrier) {
    case Carrier::c21: return c.r21;
    case Carrier::c32: return c.r32;
    case Carrier::c31: return c.r31;
    }
    return 0.0;
}

struct Observation
{
    double dH1 = 0.0;
    double dH2 = 0.0;
    std::array<cplx, 8> demod{};
};

class Protocol
{
public:
    Protocol(const SimConfig& cfg, Enantiomer e, bool ramp)
        : cfg_(cfg), mu_(dipole_matrix_elements(cfg.molecule, e)), a_(coupling_factors(mu_)), ramp_(ramp)
    {
    }

    double alpha(double t) const { return ramp_ ? ramps(t, cfg_.drive.omega_r).alpha : 1.0; }

    Matrix4 hamiltonian(double t) const
    {
        const TorusPoint th = drive_phases(t, cfg_.drive, ramp_);
        Envelopes env = envelopes(th, cfg_.drive);
        const double al = alpha(t);
        env.e21 *= al;
        env.e32 *= al;
        env.e31 *= al;
        return rotating_h4(env, mu_, cfg_.drive.delta);
    }

    Observation observe(double t, const State4& psi) const
    {
        const TorusPoint th = drive_phases(t, cfg_.drive, ramp_);
        const double al = alpha(t);
        const auto grads = envelope_gradients(th, cfg_.drive);
        const Coherences c = coherences(psi);
        Observation o;
        o.dH1 = al * coupling_expectation(grads[0], a_, c);
        o.dH2 = al * coupling_expectation(grads[1], a_, c);
        const cplx rot[2] = {std::polar(1.0, -th.theta1), std::polar(1.0, -th.theta2)};
        for (std::size_t k = 0; k < kSidebandLines.size(); ++k) {
            const LineSpec& line = kSidebandLines[k];
            const cplx ph = line.sign > 0 ? rot[line.mode - 1] : std::conj(rot[line.mode - 1]);
            o.demod[k] = ph * line_coherence(line, c);
        }
        return o;
    }

private:
    const SimConfig& cfg_;
    DipoleTable mu_;
    CouplingFactors a_;
    bool ramp_;
};

State4 lowest_bright_state(const Matrix4& h)
{
    Eigen::SelfAdjointEigenSolver<Matrix4> es(h);
    const State4 d = dark_state();
    // The dark state is an exact zero mode; pick the lowest eigenvector with
    // negligible dark weight.
    for (int k = 0; k < 4; ++k) {
        State4 v = es.eigenvectors().col(k);
        v -= d * d.dot(v);
        if (v.norm() > 0.5)
            return v.normalized();
    }
    throw IntegratorFailure("no bright eigenvector found for the initial state");
}

// Columns |1,0>, bright, |3,0>.
Eigen::Matrix<cplx, 4, 3> bright_basis()
{
    Eigen::Matrix<cplx, 4, 3> b = Eigen::Matrix<cplx, 4, 3>::Zero();
    b(basis::g, 0) = 1.0;
    b.col(1) = bright_state();
    b(basis::top, 2) = 1.0;
    return b;
}

} // namespace

RampValues ramps(double t, double omega_r) noexcept
{
    const double t_alpha = -2.0 * std::numbers::pi / omega_r;
    const double t_beta = -std::numbers::pi / omega_r;
    if (t <= t_alpha)
        return {0.0, 0.0};
    if (t <= t_beta)
        return {0.5 * (1.0 - std::cos(omega_r * t)), 0.0};
    if (t < 0.0)
        return {1.0, 0.5 * (1.0 + std::cos(omega_r * t))};
    return {1.0, 1.0};
}

TorusPoint drive_phases(double t, const DriveParams& drive, bool ramp) noexcept
{
    if (!ramp || t >= 0.0)
        return {drive.omega1 * t, drive.omega2 * t};
    const double wr = drive.omega_r;
    // int_t^0 beta(s) ds
    double integral = 0.0;
    if (t <= -std::numbers::pi / wr)
        integral = std::numbers::pi / (2.0 * wr);
    else
        integral = -0.5 * t - std::sin(wr * t) / (2.0 * wr);
    return {-drive.omega1 * integral, -drive.omega2 * integral};
}

EvolveOptions evolve_options(const SimConfig& cfg)
{
    EvolveOptions o;
    o.ramp = cfg.ramp;
    o.stride = cfg.stride;
    o.dt = cfg.dt;
    return o;
}

const TrajectorySample& Trajectory::nearest(double t) const
{
    if (samples.empty())
        throw InvalidParameters("empty trajectory");
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const TrajectorySample& s, double x) { return s.t < x; });
    if (it == samples.end())
        return samples.back();
    if (it == samples.begin())
        return *it;
    auto prev = std::prev(it);
    return (t - prev->t) <= (it->t - t) ? *prev : *it;
}

Matrix4 protocol_hamiltonian(double t, const SimConfig& cfg, Enantiomer e, bool ramp)
{
    return Protocol(cfg, e, ramp).hamiltonian(t);
}

namespace {

template <int N>
double unitary_step(const Eigen::Matrix<cplx, N, N>& H, double h, Eigen::Matrix<cplx, N, 1>& psi)
{
    using Mat = Eigen::Matrix<cplx, N, N>;
    thread_local Eigen::SelfAdjointEigenSolver<Mat> es;
    es.compute(H);
    const auto& lam = es.eigenvalues();
    const Mat& V = es.eigenvectors();
    const double radius = std::max(std::abs(lam[0]), std::abs(lam[N - 1]));

    Eigen::Matrix<cplx, N, 1> ph;
    for (int k = 0; k < N; ++k)
        ph[k] = std::polar(1.0, -lam[k] * h);
    Mat U = V * ph.asDiagonal() * V.adjoint();
    // One Newton-Schulz pass pulls U back onto the unitary group; without it
    // the eigenvector round-off accumulates into a norm drift over 1e8 steps.
    const Mat G = U.adjoint() * U - Mat::Identity();
    U.noalias() -= 0.5 * (U * G);
    psi = U * psi;
    return radius;
}

// Fourth-order Magnus step from H at the two Gauss-Legendre nodes:
// H_eff = (H1 + H2)/2 - i (sqrt3/12) h [H2, H1].
template <int N>
double magnus4_step_n(const Eigen::Matrix<cplx, N, N>& H1, const Eigen::Matrix<cplx, N, N>& H2, double h,
                      Eigen::Matrix<cplx, N, 1>& psi)
{
    using Mat = Eigen::Matrix<cplx, N, N>;
    static const double c = std::sqrt(3.0) / 12.0;
    const Mat comm = H2 * H1 - H1 * H2;
    Mat heff = 0.5 * (H1 + H2) - cplx(0.0, c * h) * comm;
    heff = (0.5 * (heff + heff.adjoint())).eval();
    return unitary_step<N>(heff, h, psi);
}

// Restriction of a dark-state-preserving H4 to the basis |1,0>, bright, |3,0>.
Matrix3 bright_block(const Matrix4& H)
{
    using namespace basis;
    const double s = 1.0 / std::numbers::sqrt2;
    Matrix3 b;
    b(0, 0) = H(g, g);
    b(1, 0) = s * (H(plus, g) + H(minus, g));
    b(2, 0) = H(top, g);
    b(1, 1) = 0.5 * (H(plus, plus) + H(plus, minus) + H(minus, plus) + H(minus, minus));
    b(2, 1) = s * (H(top, plus) + H(top, minus));
    b(2, 2) = H(top, top);
    b(0, 1) = std::conj(b(1, 0));
    b(0, 2) = std::conj(b(2, 0));
    b(1, 2) = std::conj(b(2, 1));
    return b;
}

} // namespace

double exponential_step(const Matrix4& H, double h, State4& psi)
{
    return unitary_step<4>(H, h, psi);
}

double magnus4_step(const Matrix4& H1, const Matrix4& H2, double h, State4& psi)
{
    return magnus4_step_n<4>(H1, H2, h, psi);
}

Trajectory evolve(const SimConfig& cfg, Enantiomer e, double t_start, double t_end, const EvolveOptions& opt)
{
    if (!(t_end > t_start))
        throw InvalidParameters("evolve requires t_end > t_start");
    if (!(opt.dt > 0.0))
        throw ConfigError("integrator step dt must be positive");
    if (opt.stride < 1)
        throw InvalidParameters("trajectory stride must be >= 1");
    if (opt.ramp && t_start > -two_pi / cfg.drive.omega_r * (1.0 - 1.0e-12))
        throw InvalidParameters("adiabatic preparation requires t_start <= -2 pi / omega_r");

    const Protocol protocol(cfg, e, opt.ramp);

    std::vector<double> breaks{t_start, t_end};
    if (t_start < 0.0 && t_end > 0.0)
        breaks.push_back(0.0);
    for (double r : opt.record_times)
        if (r > t_start && r < t_end)
            breaks.push_back(r);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    Trajectory traj;
    traj.enantiomer = e;
    traj.ramp = opt.ramp;
    traj.dt = opt.dt;
    traj.stride = opt.stride;

    State4 psi = State4::Zero();
    if (opt.initial == InitialState::Ground)
        psi[basis::g] = 1.0;
    else
        psi = lowest_bright_state(protocol.hamiltonian(t_start));

    // H4 annihilates the dark state, so its amplitude is constant and only the
    // bright coordinates are propagated.
    const State4 dark = dark_state();
    const cplx dark_amp = dark.dot(psi);
    Eigen::Matrix<cplx, 3, 1> c{psi[basis::g], bright_state().dot(psi), psi[basis::top]};
    auto assemble = [&] {
        const cplx b = c[1] / std::numbers::sqrt2;
        psi[basis::g] = c[0];
        psi[basis::plus] = b + dark_amp * dark[basis::plus];
        psi[basis::minus] = b + dark_amp * dark[basis::minus];
        psi[basis::top] = c[2];
    };
    assemble();

    const double acc_origin = std::max(t_start, 0.0);
    CompensatedSum work1, work2;
    std::array<ComplexSum, 8> demod;

    auto record = [&](double t, const Observation& o) {
        TrajectorySample s;
        s.t = t;
        s.psi = psi;
        s.theta = drive_phases(t, cfg.drive, opt.ramp);
        const RampValues rv = opt.ramp ? ramps(t, cfg.drive.omega_r) : RampValues{1.0, 1.0};
        s.alpha = rv.alpha;
        s.beta = rv.beta;
        s.dH1 = o.dH1;
        s.dH2 = o.dH2;
        s.acc.work1 = work1.value();
        s.acc.work2 = work2.value();
        for (std::size_t k = 0; k < demod.size(); ++k)
            s.acc.demod[k] = demod[k].value();
        traj.samples.push_back(std::move(s));
    };

    Observation prev = protocol.observe(t_start, psi);
    record(t_start, prev);

    std::size_t step = 0;
    for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
        const double a = breaks[seg];
        const double b = breaks[seg + 1];
        const auto n = static_cast<std::size_t>(std::ceil((b - a) / opt.dt * (1.0 - 1.0e-12)));
        const double h = (b - a) / static_cast<double>(n);
        const bool accumulate = a >= acc_origin;
        for (std::size_t k = 0; k < n; ++k) {
            const double t0 = a + h * static_cast<double>(k);
            const double t1 = (k + 1 == n) ? b : a + h * static_cast<double>(k + 1);
            const double dt = t1 - t0;
            const double radius =
                magnus4_step_n<3>(bright_block(protocol.hamiltonian(t0 + kGaussLow * dt)),
                                  bright_block(protocol.hamiltonian(t0 + kGaussHigh * dt)), dt, c);
            assemble();
            if (radius * h > kMaxPhasePerStep) {
                std::ostringstream os;
                os << "step too large: |H| dt = " << radius * h << " exceeds " << kMaxPhasePerStep;
                throw ConfigError(os.str());
            }
            const double err = std::abs(psi.norm() - 1.0);
            traj.max_norm_error = std::max(traj.max_norm_error, err);
            if (err > kNormTolerance) {
                std::ostringstream os;
                os << "norm drift " << err << " at t = " << t1;
                throw IntegratorFailure(os.str());
            }
            const Observation cur = protocol.observe(t1, psi);
            if (accumulate) {
                const double w = 0.5 * (t1 - t0);
                work1.add(w * (prev.dH1 + cur.dH1));
                work2.add(w * (prev.dH2 + cur.dH2));
                for (std::size_t l = 0; l < demod.size(); ++l)
                    demod[l].add(w * (prev.demod[l] + cur.demod[l]));
            }
            prev = cur;
            ++step;
            if (k + 1 == n || step % static_cast<std::size_t>(opt.stride) == 0)
                record(t1, cur);
        }
    }
    traj.steps = step;
    traj.acc_origin = acc_origin;
    return traj;
}

BandPopulations populations_at(const TrajectorySample& s, const SimConfig& cfg, Enantiomer e)
{
    Envelopes env = envelopes(s.theta, cfg.drive);
    env.e21 *= s.alpha;
    env.e32 *= s.alpha;
    env.e31 *= s.alpha;
    const Matrix4 h = rotating_h4(env, dipole_matrix_elements(cfg.molecule, e), cfg.drive.delta);

    static const Eigen::Matrix<cplx, 4, 3> B = bright_basis();
    const Matrix3 hb = B.adjoint() * h * B;
    const BandDecomposition bd = decompose(hb);
    const Eigen::Matrix<cplx, 3, 1> amp = bd.vectors.adjoint() * (B.adjoint() * s.psi);

    BandPopulations p;
    p.t = s.t;
    p.L = std::norm(amp[0]);
    p.M = std::norm(amp[1]);
    p.U = std::norm(amp[2]);
    p.dark = std::norm(dark_state().dot(s.psi));
    p.ambiguous = bd.near_degenerate;
    return p;
}

std::vector<BandPopulations> band_populations(const Trajectory& traj, const SimConfig& cfg, Enantiomer e)
{
    std::vector<BandPopulations> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples)
        out.push_back(populations_at(s, cfg, e));
    return out;
}

PumpingReport pumping_rate(const Trajectory& traj, const SimConfig& cfg, Enantiomer e, double window_periods)
{
    if (traj.enantiomer != e)
        throw InvalidParameters("trajectory belongs to the other enantiomer");
    if (!(window_periods >= 1.0))
        throw InvalidParameters("averaging window must span at least one omega2 period");
    if (traj.samples.empty())
        throw InvalidParameters("empty trajectory");
    const double period = cfg.omega2_period();
    const double target = traj.acc_origin + window_periods * period;
    if (traj.samples.back().t < target * (1.0 - 1.0e-12))
        throw InvalidParameters("trajectory does not cover the requested averaging window");

    const TrajectorySample& s = traj.nearest(target);
    const double T = s.t - traj.acc_origin;
    if (!(T > 0.0))
        throw InvalidParameters("averaging window has zero length");

    PumpingReport r;
    r.window = T;
    r.window_periods = T / period;
    r.P1 = cfg.drive.omega1 * s.acc.work1 / T;
    r.P2 = cfg.drive.omega2 * s.acc.work2 / T;
    r.P21 = 0.5 * (r.P2 - r.P1);
    r.q = two_pi * r.P21 / (cfg.drive.omega1 * cfg.drive.omega2);
    return r;
}

std::vector<int> fibonacci_between(int lo, int hi)
{
    std::vector<int> out;
    long long a = 1, b = 2;
    while (a <= hi) {
        if (a >= lo)
            out.push_back(static_cast<int>(a));
        const long long c = a + b;
        a = b;
        b = c;
    }
    return out;
}

bool is_fibonacci(double periods)
{
    if (!(periods >= 1.0) || periods != std::floor(periods) || periods > 2.0e9)
        return false;
    const auto f = fibonacci_between(static_cast<int>(periods), static_cast<int>(periods));
    return !f.empty();
}

ResponseCheck adiabatic_response_check(TorusPoint p, const SimConfig& cfg, Enantiomer e, int band,
                                       const ResponseCheckOptions& opt)
{
    if (band < 0 || band > 2)
        throw InvalidParameters("band index must be 0, 1 or 2");
    ResponseCheck out;
    const BandDecomposition bd = band_decomposition(p, cfg, e);
    const auto& en = bd.energies;
    if (band == 0)
        out.gap = en[1] - en[0];
    else if (band == 2)
        out.gap = en[2] - en[1];
    else
        out.gap = std::min(en[1] - en[0], en[2] - en[1]);

    const double w1 = cfg.drive.omega1;
    const double w2 = cfg.drive.omega2;
    if (!(out.gap > 10.0 * std::max(w1, w2))) {
        out.skipped = true;
        return out;
    }

    out.energy_gradient = band_energy_gradient(p, cfg, e, band);
    out.curvature = berry_curvature_fd(p, cfg, e, band);
    out.predicted = {out.energy_gradient[0] - w2 * out.curvature, out.energy_gradient[1] + w1 * out.curvature};

    // theta(t) = start + omega * int_0^t v, v rising smoothly from 0 to 1 over
    // [0, tau]; int_0^tau v = tau / 2, so the path ends at p with full speed.
    const double tau = opt.ramp_gaps / out.gap;
    const TorusPoint start{p.theta1 - 0.5 * w1 * tau, p.theta2 - 0.5 * w2 * tau};
    auto phases = [&](double t) {
        const double s = 0.5 * t - tau / (2.0 * std::numbers::pi) * std::sin(std::numbers::pi * t / tau);
        return TorusPoint{start.theta1 + w1 * s, start.theta2 + w2 * s};
    };
    const DipoleTable mu = dipole_matrix_elements(cfg.molecule, e);
    auto hamiltonian = [&](double t) { return rotating_h4(envelopes(phases(t), cfg.drive), mu, cfg.drive.delta); };

    static const Eigen::Matrix<cplx, 4, 3> B = bright_basis();
    const BandDecomposition b0 = decompose(B.adjoint() * hamiltonian(0.0) * B);
    State4 psi = B * b0.vectors.col(band);

    const auto n = static_cast<std::size_t>(std::ceil(tau / opt.dt));
    const double h = tau / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = static_cast<double>(k) * h;
        magnus4_step(hamiltonian(t0 + kGaussLow * h), hamiltonian(t0 + kGaussHigh * h), h, psi);
    }

    const auto grads = envelope_gradients(p, cfg.drive);
    for (int i = 0; i < 2; ++i) {
        const Matrix4 dh = rotating_h4(grads[i], mu, 0.0);
        out.measured[i] = psi.dot(dh * psi).real();
    }
    out.residual = std::max(std::abs(out.measured[0] - out.predicted[0]), std::abs(out.measured[1] - out.predicted[1]));
    return out;
}

} // namespace tfc
