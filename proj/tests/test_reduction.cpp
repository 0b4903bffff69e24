#include "doctest.h"

#include "stapghz/dynamics.hpp"
#include "stapghz/reduction.hpp"
#include "stapghz/tqd.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace stap;
using namespace stap::hilbert;
using namespace stap::reduction;

namespace {

const double kSqrt3 = std::sqrt(3.0);

pulses::ApfPulse default_apf(double detuning = 2.2, double beta = 0.0) {
    return pulses::synthesize_apf(pulses::mixing_angle(pulses::StirapPulseParams{}), detuning,
                                  beta);
}

Eigen::VectorXd sorted_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> s(m);
    return s.eigenvalues();
}

} // namespace

TEST_CASE("Zeno decomposition spectrum and vectors") {
    const auto space = enumerate_basis(1);
    const auto z = zeno_decompose(space, model::ModelParams{});
    const std::array<double, 5> expected{0.0, 1.0, -1.0, kSqrt3, -kSqrt3};
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(z.eps[k] == doctest::Approx(expected[k]).epsilon(1e-12));
    }
    const auto psi = model::single_excitation_basis(space);
    CHECK(std::abs(z.phi[0].amplitudes.dot(psi[1].amplitudes)) ==
          doctest::Approx(1.0 / kSqrt3).epsilon(1e-12));

    // φ₀ = (ψ₂ − ψ₄ + ψ₆)/√3
    const Vector dark = (psi[1].amplitudes - psi[3].amplitudes + psi[5].amplitudes) / kSqrt3;
    CHECK(max_abs(z.phi[0].amplitudes - dark) < 1e-12);

    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            REQUIRE(std::abs(z.phi[i].amplitudes.dot(z.phi[j].amplitudes) - (i == j ? 1.0 : 0.0)) <
                    1e-12);
        }
    }

    Matrix sum = Matrix::Zero(108, 108);
    for (const auto& p : z.projectors) {
        sum += p.matrix();
    }
    Matrix p7 = Matrix::Zero(108, 108);
    for (const auto& k : psi) {
        p7 += k.amplitudes * k.amplitudes.adjoint();
    }
    CHECK(max_abs(sum - p7) < 1e-12);
    CHECK(z.projectors.size() == 5);
}

TEST_CASE("Zeno decomposition with unequal couplings") {
    const auto space = enumerate_basis(1);
    const auto z = zeno_decompose(space, model::ModelParams{1.0, 0.6, 0.0});
    CHECK(z.eps[0] == doctest::Approx(0.0).epsilon(1e-12));
    const auto hac = model::atom_cavity_coupling(space, model::ModelParams{1.0, 0.6, 0.0});
    const auto psi = model::single_excitation_basis(space);
    Matrix block(5, 5);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            block(i, j) = psi[static_cast<std::size_t>(i + 1)].amplitudes.dot(
                hac.matrix() * psi[static_cast<std::size_t>(j + 1)].amplitudes);
        }
    }
    const auto ev = sorted_eigenvalues(block);
    CHECK(z.eps[4] == doctest::Approx(ev(0)));
    CHECK(z.eps[3] == doctest::Approx(ev(4)));
}

TEST_CASE("reduced seven-state Hamiltonian") {
    const auto space = enumerate_basis(1);
    const auto z = zeno_decompose(space, model::ModelParams{});
    const pulses::StirapPulseParams p{.beta = 0.6};
    const auto drive = model::DrivePulses::from(p);
    const auto h7 = h_re(z, drive);

    const auto off = h_re(z, model::DrivePulses{[](double) { return 0.0; },
                                                [](double) { return 0.0; }, 0.0, 1.0});
    const Matrix d = off.matrix(0.5);
    CHECK(max_abs(d - Matrix(d.diagonal().asDiagonal())) == 0.0);
    const std::array<double, 7> diag{0.0, 0.0, 0.0, 1.0, -1.0, kSqrt3, -kSqrt3};
    for (int k = 0; k < 7; ++k) {
        CHECK(d(k, k).real() == doctest::Approx(diag[static_cast<std::size_t>(k)]).epsilon(1e-12));
    }

    const auto full = model::build_H_I(space, drive, model::ModelParams{});
    for (double t : {4.0, 17.5, 29.0}) {
        const Matrix projected = z.basis.adjoint() * full.matrix(t) * z.basis;
        CHECK(max_abs(projected - h7.matrix(t)) < 1e-12);
        CHECK(std::abs(h7.matrix(t)(2, 0) - drive.omega1(t) / kSqrt3) < 1e-12);
    }
}

TEST_CASE("resonant effective model") {
    const pulses::StirapPulseParams p{.beta = 0.3};
    const auto drive = model::DrivePulses::from(p);
    const auto eff = h_eff_resonant(drive);
    const auto m = pulses::mixing_angle(p);
    for (double t : {2.0, 17.5, 33.0}) {
        const Matrix h = eff.hamiltonian.matrix(t);
        CHECK(std::abs(h.trace()) < 1e-15);
        const auto ev = sorted_eigenvalues(h);
        const double w = m.omega(t) / kSqrt3;
        CHECK(ev(0) == doctest::Approx(-w).epsilon(1e-12));
        CHECK(std::abs(ev(1)) < 1e-12);
        CHECK(ev(2) == doctest::Approx(w).epsilon(1e-12));

        const auto es = effective_eigensystem(m, t, p.beta);
        CHECK((h * es.n0).norm() < 1e-12);
        CHECK((h * es.n_plus - w * es.n_plus).norm() < 1e-12);
        CHECK((h * es.n_minus + w * es.n_minus).norm() < 1e-12);
        Eigen::Matrix3cd n;
        n << es.n0, es.n_plus, es.n_minus;
        CHECK((n.adjoint() * n - Eigen::Matrix3cd::Identity()).norm() < 1e-12);
    }
    CHECK(eff.validity_ratio == doctest::Approx(0.127104916265).epsilon(1e-9));
}

TEST_CASE("Omega3 off reduces to a Rabi pair") {
    model::DrivePulses d{[](double) { return 0.4; }, [](double) { return 0.0; }, 0.0, 10.0};
    const auto h = h_eff_resonant(d).hamiltonian.matrix(1.0);
    CHECK(std::abs(h(kPhi0, kPsi1) - 0.4 / kSqrt3) < 1e-15);
    CHECK(h.row(kPsi7).norm() == 0.0);
}

TEST_CASE("effective eigensystem special points") {
    const pulses::StirapPulseParams p{};
    const auto m = pulses::mixing_angle(p);
    // θ ≈ 0 at t = 0
    const auto e0 = effective_eigensystem(m, 0.0, 0.0);
    CHECK(std::abs(e0.n0(0)) == doctest::Approx(1.0).epsilon(1e-6));

    // the default family stops just short of θ = π/4
    const auto end = effective_eigensystem(m, p.t_final, 0.0);
    Eigen::Vector3cd ghz(1.0 / std::sqrt(2.0), 0.0, -1.0 / std::sqrt(2.0));
    CHECK((end.n0 - ghz).norm() < 1e-3);

    // with α = π/2 the pulses cross at mid-protocol: n₀ is the GHZ superposition
    pulses::StirapPulseParams q{};
    q.alpha = std::numbers::pi / 2.0;
    const auto mq = pulses::mixing_angle(q);
    double lo = 0.0;
    double hi = 35.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mq.theta(mid) < std::numbers::pi / 4.0 ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(17.5).epsilon(1e-9));
    const auto e = effective_eigensystem(mq, lo, 0.0);
    CHECK((e.n0 - ghz).norm() < 1e-9);
}

TEST_CASE("counter-diabatic term") {
    const pulses::StirapPulseParams p{.beta = 0.9};
    const auto m = pulses::mixing_angle(p);
    const auto cdd = cdd_hamiltonian(m, p.beta);
    for (double t : {1.0, 17.5, 30.0}) {
        const Matrix h = cdd.hamiltonian.matrix(t);
        CHECK(std::abs(h(kPsi1, kPsi7) - kI * std::polar(m.theta_dot(t), p.beta)) < 1e-15);
        CHECK(h.row(kPhi0).norm() == 0.0);
        CHECK(h.col(kPhi0).norm() == 0.0);
        CHECK(max_abs(h - h.adjoint()) < 1e-15);
    }

    // engine agreement, grid spacing 1e-4 t_f
    const auto drive = model::DrivePulses::from(p);
    const auto trace = tqd::spectral_trace(h_eff_resonant(drive).hamiltonian,
                                           tqd::uniform_grid(p.t_final, 10000));
    double worst = 0.0;
    for (std::size_t i = 0; i < trace.size(); i += 7) {
        worst = std::max(worst, max_abs(tqd::cdd_correction(trace, i).matrix() -
                                        cdd.hamiltonian.matrix(trace.times[i])));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("counter-diabatic driving transports the dark state") {
    for (double tf : {1.0, 5.0, 35.0}) {
        pulses::StirapPulseParams p{};
        p.t_final = tf;
        const auto drive = model::DrivePulses::from(p);
        const auto m = pulses::mixing_angle(p);
        const auto h = h_eff_resonant(drive).hamiltonian + cdd_hamiltonian(m, 0.0).hamiltonian;
        dynamics::EvolutionOptions opts;
        opts.dt = std::min(0.005, tf / 2000.0);
        opts.samples = 100;
        const auto start = effective_eigensystem(m, 0.0, 0.0).n0;
        const auto r = dynamics::schrodinger_evolve(h, Ket(Vector(start)), tf, opts);
        double worst = 0.0;
        for (std::size_t i = 0; i < r.times.size(); ++i) {
            const auto n0 = effective_eigensystem(m, r.times[i], 0.0).n0;
            worst = std::max(worst, 1.0 - std::norm(n0.dot(r.states[i].amplitudes)));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("detuned effective models") {
    const auto apf = default_apf(2.2, 0.0);
    const auto nonres = h_eff_nonresonant(apf);
    const auto elim = adiabatic_eliminate(apf);
    const auto fin = h_eff_final(apf);
    for (double t : {5.0, 17.5, 28.0}) {
        const Matrix h3 = nonres.hamiltonian.matrix(t);
        CHECK(std::abs(h3(kPhi0, kPhi0) - 2.2) < 1e-15);
        const double w = apf.omega_tilde(t);
        const double stark = -w * w / (3.0 * 2.2);
        const Matrix he = elim.hamiltonian.matrix(t);
        CHECK(std::abs(he(kPsi1, kPsi1) - stark) < 1e-15);
        CHECK(std::abs(he(kPsi7, kPsi7) - stark) < 1e-15);
        CHECK(std::abs(he(kPsi1, kPsi7) - std::polar(apf.omega_x(t), apf.beta_prime)) < 1e-15);
        // equal Stark shifts drop as a global shift
        const Matrix shifted = he - stark * Matrix(Matrix::Identity(3, 3));
        Matrix expected = fin.hamiltonian.matrix(t);
        expected(kPhi0, kPhi0) = -stark;
        CHECK(max_abs(shifted - expected) < 1e-15);
        CHECK(std::abs(fin.hamiltonian.matrix(t)(kPsi1, kPsi7) -
                       std::polar(apf.omega_x(t), apf.beta_prime)) < 1e-15);
    }
    auto bad = apf;
    bad.detuning = 0.0;
    CHECK_THROWS_AS(adiabatic_eliminate(bad), std::invalid_argument);
    CHECK_THROWS_AS(h_eff_final(bad), std::invalid_argument);
    CHECK(fin.validity_ratio == doctest::Approx(apf.peak_amplitude / (kSqrt3 * 2.2)).epsilon(1e-6));
}

TEST_CASE("final effective model equals the counter-diabatic term") {
    for (double beta : {0.0, 0.5, std::numbers::pi}) {
        const pulses::StirapPulseParams p{.beta = beta};
        const auto m = pulses::mixing_angle(p);
        const auto apf = pulses::synthesize_apf(m, 2.2, beta);
        const auto fin = h_eff_final(apf);
        const auto cdd = cdd_hamiltonian(m, beta);
        for (int i = 0; i <= 100; ++i) {
            const double t = p.t_final * i / 100.0;
            REQUIRE(max_abs(fin.hamiltonian.matrix(t) - cdd.hamiltonian.matrix(t)) < 1e-10);
        }
    }
}

TEST_CASE("elimination versus the detuned three-level model") {
    const auto apf = default_apf();
    dynamics::EvolutionOptions opts;
    opts.samples = 350;
    Vector start = Vector::Zero(3);
    start(kPsi1) = 1.0;
    const auto a = dynamics::schrodinger_evolve(h_eff_nonresonant(apf).hamiltonian, Ket(start),
                                                35.0, opts);
    const auto b =
        dynamics::schrodinger_evolve(h_eff_final(apf).hamiltonian, Ket(start), 35.0, opts);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        for (auto k : {kPsi1, kPsi7}) {
            worst = std::max(worst, std::abs(std::norm(a.states[i].amplitudes(k)) -
                                             std::norm(b.states[i].amplitudes(k))));
        }
    }
    CHECK(worst == doctest::Approx(0.0401).epsilon(0.02));
}

TEST_CASE("Zeno limit") {
    pulses::StirapPulseParams p{};
    p.omega0 = 0.05;
    p.t_final = 140.0;
    const double small = zeno_discrepancy(p);
    CHECK(small < 0.02);
    CHECK(small == doctest::Approx(0.00085505).epsilon(1e-3));
    p.omega0 = 0.1;
    p.t_final = 70.0;
    const double mid = zeno_discrepancy(p);
    p.omega0 = 0.2;
    p.t_final = 35.0;
    const double large = zeno_discrepancy(p);
    CHECK(small < mid);
    CHECK(mid < large);
}
