#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "tfc/hamiltonian.hpp"

using namespace tfc;
using namespace std::complex_literals;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXcd& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end());
    return v;
}

SimConfig random_parameters(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> mu(-1.0, 1.0);
    std::uniform_real_distribution<double> field(0.1, 10.0);
    SimConfig cfg = propanediol_config();
    cfg.molecule.mu_a = mu(rng);
    cfg.molecule.mu_b = mu(rng);
    cfg.molecule.mu_c = mu(rng);
    cfg.drive.E21 = field(rng) * kPropanediolE0;
    cfg.drive.E32 = field(rng) * kPropanediolE0;
    cfg.drive.E31 = field(rng) * kPropanediolE0;
    cfg.drive.m = 4.0 * mu(rng);
    cfg.drive.delta = 1e-10 * mu(rng);
    return cfg;
}

// Direct transcription of the rotating-frame matrix.
Matrix4 h4_oracle(const Envelopes& env, const MolecularParams& mol, double mu_c, double delta)
{
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
    const cplx a21 = -mol.mu_b * env.e21 / (2.0 * s6);
    const cplx a32 = -mol.mu_a * env.e32 / (4.0 * s2);
    const cplx a31 = 1i * mu_c * env.e31 / (2.0 * s3);
    Matrix4 h;
    h << -delta, std::conj(a21), std::conj(a21), std::conj(a31), //
        a21, 0.0, 0.0, std::conj(a32),                           //
        a21, 0.0, 0.0, std::conj(a32),                           //
        a31, a32, a32, delta;
    return h;
}

} // namespace

TEST_CASE("constructed matrices are Hermitian")
{
    std::mt19937_64 rng(1);
    const SimConfig cfg = propanediol_config();
    for (int trial = 0; trial < 100; ++trial) {
        const TorusPoint p = test::random_point(rng);
        for (Enantiomer e : {Enantiomer::R, Enantiomer::S}) {
            CHECK(hermiticity_defect(rotating_h4(p, cfg, e)) <= 1e-14);
            CHECK(hermiticity_defect(effective_h3(p, cfg, e)) <= 1e-14);
            CHECK(hermiticity_defect(lab_hamiltonian(1.0e9 * trial, cfg, e)) <= 1e-14);
        }
    }
}

TEST_CASE("rotating_h4 matches the explicit matrix")
{
    std::mt19937_64 rng(2);
    const SimConfig cfg = propanediol_config();
    for (int trial = 0; trial < 50; ++trial) {
        const TorusPoint p = test::random_point(rng);
        const Envelopes env = envelopes(p, cfg.drive);
        const Matrix4 R = rotating_h4(p, cfg, Enantiomer::R);
        const Matrix4 S = rotating_h4(p, cfg, Enantiomer::S);
        CHECK(max_abs(R - h4_oracle(env, cfg.molecule, cfg.molecule.mu_c, cfg.drive.delta)) <= 1e-15 * max_abs(R));
        CHECK(max_abs(S - h4_oracle(env, cfg.molecule, -cfg.molecule.mu_c, cfg.drive.delta)) <= 1e-15 * max_abs(S));
    }
}

TEST_CASE("rotating_h4 at the torus origin keeps only the 31 coupling")
{
    const SimConfig cfg = propanediol_config();
    const Matrix4 h = rotating_h4({0.0, 0.0}, cfg, Enantiomer::R);
    using namespace basis;
    CHECK(h(plus, g) == 0.0);
    CHECK(h(minus, g) == 0.0);
    CHECK(h(top, plus) == 0.0);
    CHECK(h(top, minus) == 0.0);
    CHECK(std::abs(h(top, g)) > 0.0);
    CHECK(h(g, g).real() == -cfg.drive.delta);
    CHECK(h(top, top).real() == cfg.drive.delta);
}

TEST_CASE("dark state is an exact zero mode")
{
    std::mt19937_64 rng(3);
    const State4 d = dark_state();
    CHECK(std::abs(d.norm() - 1.0) < 1e-15);
    CHECK(std::abs(d.dot(bright_state())) < 1e-16);
    for (int trial = 0; trial < 100; ++trial) {
        const SimConfig cfg = random_parameters(rng);
        const TorusPoint p = test::random_point(rng);
        for (Enantiomer e : {Enantiomer::R, Enantiomer::S}) {
            const Matrix4 h = rotating_h4(p, cfg, e);
            const double norm = h.operatorNorm();
            CHECK((h * d).norm() <= 1e-14 * norm);
        }
    }
}

TEST_CASE("eigenvalues at (pi/2, pi/2) include an exact zero")
{
    const SimConfig cfg = propanediol_config();
    const double h = std::numbers::pi / 2.0;
    const Matrix4 H = rotating_h4({h, h}, cfg, Enantiomer::R);
    const auto ev = sorted_eigenvalues(H);
    const auto oracle = sorted_eigenvalues(h4_oracle(envelopes({h, h}, cfg.drive), cfg.molecule, cfg.molecule.mu_c,
                                                     cfg.drive.delta));
    const double scale = H.operatorNorm();
    int zeros = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(ev[k] - oracle[k]) <= 1e-14 * scale);
        zeros += std::abs(ev[k]) <= 1e-14 * scale ? 1 : 0;
    }
    CHECK(zeros == 1);
}

TEST_CASE("effective_h3 and rotating_h4 share their bright spectrum")
{
    std::mt19937_64 rng(4);
    const SimConfig cfg = propanediol_config();
    const State4 d = dark_state();
    for (int trial = 0; trial < 100; ++trial) {
        const TorusPoint p = test::random_point(rng);
        for (Enantiomer e : {Enantiomer::R, Enantiomer::S}) {
            const Matrix4 h4 = rotating_h4(p, cfg, e);
            Eigen::SelfAdjointEigenSolver<Matrix4> es(h4);
            std::vector<double> bright;
            for (int k = 0; k < 4; ++k)
                if (std::abs(d.dot(es.eigenvectors().col(k))) < 0.5)
                    bright.push_back(es.eigenvalues()[k]);
            REQUIRE(bright.size() == 3);
            std::sort(bright.begin(), bright.end());
            const auto h3 = sorted_eigenvalues(effective_h3(p, cfg, e));
            const double scale = std::max(std::abs(h3.front()), std::abs(h3.back()));
            for (int k = 0; k < 3; ++k)
                CHECK(std::abs(h3[k] - bright[k]) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("effective_h3 at the origin with zero detuning")
{
    SimConfig cfg = propanediol_config();
    cfg.drive.delta = 0.0;
    const Matrix3 h = effective_h3({0.0, 0.0}, cfg, Enantiomer::R);
    const double c = cfg.molecule.mu_c * cfg.drive.E31 * (cfg.drive.m - 2.0) / (2.0 * std::sqrt(3.0));
    const Matrix3 expected = c * spin1::Lz();
    CHECK(max_abs(h - expected) <= 1e-15 * std::abs(c));
    const auto ev = sorted_eigenvalues(h);
    CHECK(ev[0] == doctest::Approx(-std::abs(c)).epsilon(1e-14));
    CHECK(std::abs(ev[1]) <= 1e-15 * std::abs(c));
    CHECK(ev[2] == doctest::Approx(std::abs(c)).epsilon(1e-14));
}

TEST_CASE("spin-1 operator algebra")
{
    using namespace spin1;
    const Matrix3 comm = Lx() * Ly() - Ly() * Lx();
    CHECK(max_abs(comm - 1i * Lz()) < 1e-15);
    CHECK(max_abs(Lplus() - (Lx() + 1i * Ly())) < 1e-15);
    CHECK(max_abs(Lminus() - Lplus().adjoint()) < 1e-15);
    const Matrix3 casimir = Lx() * Lx() + Ly() * Ly() + Lz() * Lz();
    CHECK(max_abs(casimir - 2.0 * Matrix3::Identity()) < 1e-15);
}

TEST_CASE("mirror image flips exactly the mu_c term")
{
    std::mt19937_64 rng(5);
    const SimConfig cfg = propanediol_config();
    for (int trial = 0; trial < 20; ++trial) {
        const TorusPoint p = test::random_point(rng);
        const Envelopes env = envelopes(p, cfg.drive);
        const DipoleComponents flipped{cfg.molecule.mu_a, cfg.molecule.mu_b, -cfg.molecule.mu_c};
        const Matrix3 S = effective_h3(p, cfg, Enantiomer::S);
        CHECK(max_abs(S - effective_h3(env, flipped, cfg.drive.delta)) <= 1e-15 * max_abs(S));
        CHECK(max_abs(S - effective_h3(p, cfg, Enantiomer::R)) > 0.0);
    }
}

TEST_CASE("Hamiltonians are quasiperiodic on the torus")
{
    std::mt19937_64 rng(6);
    const SimConfig cfg = propanediol_config();
    for (int trial = 0; trial < 50; ++trial) {
        const TorusPoint p = test::random_point(rng);
        const Matrix4 h = rotating_h4(p, cfg, Enantiomer::R);
        const Matrix3 h3 = effective_h3(p, cfg, Enantiomer::R);
        for (TorusPoint q : {TorusPoint{p.theta1 + test::two_pi, p.theta2}, TorusPoint{p.theta1, p.theta2 + test::two_pi}}) {
            CHECK(max_abs(rotating_h4(q, cfg, Enantiomer::R) - h) <= 1e-14 * max_abs(h));
            CHECK(max_abs(effective_h3(q, cfg, Enantiomer::R) - h3) <= 1e-14 * max_abs(h3));
        }
    }
}

TEST_CASE("effective_h3 gradient matches finite differences")
{
    std::mt19937_64 rng(8);
    const SimConfig cfg = propanediol_config();
    const double step = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const TorusPoint p = test::random_point(rng);
        const auto grad = effective_h3_gradient(p, cfg, Enantiomer::R);
        const Matrix3 d1 = (effective_h3({p.theta1 + step, p.theta2}, cfg, Enantiomer::R) -
                            effective_h3({p.theta1 - step, p.theta2}, cfg, Enantiomer::R)) /
                           (2 * step);
        const Matrix3 d2 = (effective_h3({p.theta1, p.theta2 + step}, cfg, Enantiomer::R) -
                            effective_h3({p.theta1, p.theta2 - step}, cfg, Enantiomer::R)) /
                           (2 * step);
        CHECK(max_abs(grad[0] - d1) <= 1e-7 * max_abs(d1) + 1e-22);
        CHECK(max_abs(grad[1] - d2) <= 1e-7 * max_abs(d2) + 1e-22);
    }
}

TEST_CASE("lab Hamiltonian")
{
    SimConfig cfg = propanediol_config();
    const MolecularParams& mol = cfg.molecule;

    SUBCASE("zero envelopes give the bare level energies")
    {
        const Matrix4 h = lab_hamiltonian(123.0, Envelopes{}, mol, cfg.drive, Enantiomer::R);
        Matrix4 bare = Matrix4::Zero();
        bare.diagonal() << 0.0, mol.eps21, mol.eps21, mol.eps31;
        CHECK(max_abs(h - bare) == 0.0);
    }
    SUBCASE("both M = +-1 states couple identically")
    {
        const Matrix4 h = lab_hamiltonian(5.0e8, cfg, Enantiomer::R);
        using namespace basis;
        CHECK(std::abs(h(plus, g)) == std::abs(h(minus, g)));
        CHECK(std::abs(h(top, plus)) == std::abs(h(top, minus)));
    }
    SUBCASE("spectral radius sits near eps3")
    {
        const Matrix4 h = lab_hamiltonian(7.7e9, cfg, Enantiomer::R);
        const auto ev = sorted_eigenvalues(h);
        const auto c = coupling_energies(mol, cfg.drive);
        const double coupling = c[0] + c[1] + c[2];
        CHECK(std::abs(ev.back() - mol.eps31) <= 3.0 * coupling);
    }
}

TEST_CASE("frame transform")
{
    const SimConfig cfg = propanediol_config();
    const FrameTransform f0 = frame_transform(0.0, cfg);
    CHECK(max_abs(f0.matrix() - Matrix4::Identity()) == 0.0);

    const FrameTransform f = frame_transform(1.0e12, cfg);
    const Matrix4 U = f.matrix();
    CHECK(max_abs(U * U.adjoint() - Matrix4::Identity()) <= 1e-14);
    CHECK(f.Omega31 == doctest::Approx(f.Omega21 + f.Omega32).epsilon(1e-15));

    SUBCASE("U^dagger H_lab U - i U^dagger dU/dt reproduces rotating_h4")
    {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0.0, 1.0e12);
        for (int trial = 0; trial < 20; ++trial) {
            const double t = u(rng);
            const TorusPoint p = test::random_point(rng);
            const Envelopes env = envelopes(p, cfg.drive);
            const FrameTransform ft = frame_transform(t, cfg);
            const Matrix4 Ut = ft.matrix();
            Matrix4 rot = Ut.adjoint() * lab_hamiltonian(t, env, cfg.molecule, cfg.drive, Enantiomer::R) * Ut;
            const auto gen = ft.generator();
            for (int k = 0; k < 4; ++k)
                rot(k, k) += gen[k];
            const Matrix4 expected = rotating_h4(env, dipole_matrix_elements(cfg.molecule, Enantiomer::R), cfg.drive.delta);
            const cplx shift = (rot - expected).trace() / 4.0;
            // Carrier phases of order Omega t ~ 1e4 rad limit the agreement.
            CHECK(max_abs(rot - expected - shift * Matrix4::Identity()) <= 1e-9 * max_abs(expected));
        }
    }
}
