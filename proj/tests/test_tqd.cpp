#include "doctest.h"

#include "stapghz/checks.hpp"
#include "stapghz/dynamics.hpp"
#include "stapghz/reduction.hpp"
#include "stapghz/tqd.hpp"

#include <cmath>
#include <numbers>

using namespace stap;
using namespace stap::hilbert;
using namespace stap::tqd;

namespace {

TimeDependentOperator constant_generator() {
    Matrix h(3, 3);
    h << -1.0, 0.2, 0.0, 0.2, 0.5, Complex(0.0, 0.3), 0.0, Complex(0.0, -0.3), 2.0;
    TimeDependentOperator op(3, 4.0);
    op.add_static(h);
    return op;
}

// Spin-1/2 in a rotating field: H₀ = (ω/2)(cos φ σz + sin φ σx), φ = φ̇ t.
TimeDependentOperator rotating_field(double omega, double rate, double tf) {
    Matrix sz = Matrix::Zero(2, 2);
    sz(0, 0) = 0.5 * omega;
    sz(1, 1) = -0.5 * omega;
    Matrix sx = Matrix::Zero(2, 2);
    sx(0, 1) = 0.5 * omega;
    sx(1, 0) = 0.5 * omega;
    TimeDependentOperator h(2, tf);
    h.add_term([rate](double t) { return Complex(std::cos(rate * t)); }, sz);
    h.add_term([rate](double t) { return Complex(std::sin(rate * t)); }, sx);
    return h;
}

} // namespace

TEST_CASE("constant generator") {
    const auto h0 = constant_generator();
    const auto trace = spectral_trace(h0, uniform_grid(4.0, 40));
    for (std::size_t i = 0; i < trace.size(); ++i) {
        REQUIRE(max_abs(trace.vectors[i] - trace.vectors[0]) < 1e-12);
        for (Eigen::Index n = 0; n < 3; ++n) {
            REQUIRE(trace.phases[i](n) ==
                    doctest::Approx(-trace.energies[0](n) * trace.times[i]).epsilon(1e-12));
        }
        REQUIRE(max_abs(cdd_correction(trace, i).matrix()) < 1e-12);
        REQUIRE(max_abs(bare_driving(trace, i).matrix()) < 1e-12);
    }
    CHECK(trace.min_gap > 1.0);
}

TEST_CASE("trace gauge and orthonormality") {
    const pulses::StirapPulseParams p{.beta = 0.4};
    const auto h0 = reduction::h_eff_resonant(model::DrivePulses::from(p)).hamiltonian;
    const auto trace = spectral_trace(h0, uniform_grid(p.t_final, 2000));
    const auto m = pulses::mixing_angle(p);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const Matrix& v = trace.vectors[i];
        REQUIRE(max_abs(v.adjoint() * v - Matrix::Identity(3, 3)) < 1e-12);
        if (i > 0) {
            const Matrix o = trace.vectors[i - 1].adjoint() * v;
            for (Eigen::Index n = 0; n < 3; ++n) {
                REQUIRE(std::abs(o(n, n).imag()) < 1e-12);
                REQUIRE(o(n, n).real() > 0.0);
            }
        }
        // spectrum {−Ω/√3, 0, Ω/√3}
        const double w = m.omega(trace.times[i]) / std::sqrt(3.0);
        REQUIRE(trace.energies[i](0) == doctest::Approx(-w).epsilon(1e-10));
        REQUIRE(std::abs(trace.energies[i](1)) < 1e-12);
        REQUIRE(trace.energies[i](2) == doctest::Approx(w).epsilon(1e-10));
    }
}

TEST_CASE("dark-state connection vanishes for real vectors") {
    const pulses::StirapPulseParams p{};
    const auto h0 = reduction::h_eff_resonant(model::DrivePulses::from(p)).hamiltonian;
    const auto trace = spectral_trace(h0, uniform_grid(p.t_final, 2000));
    for (std::size_t i = 0; i < trace.size(); i += 10) {
        const Complex c = trace.vectors[i].col(1).dot(trace.derivative(i).col(1));
        REQUIRE(std::abs(kI * c) < 1e-10);
    }
}

TEST_CASE("correction structure") {
    const pulses::StirapPulseParams p{.beta = 1.1};
    const auto h0 = reduction::h_eff_resonant(model::DrivePulses::from(p)).hamiltonian;
    const auto trace = spectral_trace(h0, uniform_grid(p.t_final, 3500));
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{1750}, std::size_t{3499},
                          std::size_t{3500}}) {
        const Matrix h1 = cdd_correction(trace, i).matrix();
        CHECK(max_abs(h1 - h1.adjoint()) < 1e-10);
        CHECK(std::abs(h1.trace()) < 1e-10);
        const Matrix diag = trace.vectors[i].adjoint() * h1 * trace.vectors[i];
        CHECK(diag.diagonal().cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("rotating field has the textbook correction") {
    // H₁ = (φ̇/2) σy for the rotating-field spin.
    const double rate = 0.7;
    const auto h0 = rotating_field(2.0, rate, 3.0);
    const auto trace = spectral_trace(h0, uniform_grid(3.0, 3000));
    Matrix sy = Matrix::Zero(2, 2);
    sy(0, 1) = -kI;
    sy(1, 0) = kI;
    for (std::size_t i = 0; i < trace.size(); i += 100) {
        CHECK(max_abs(cdd_correction(trace, i).matrix() - 0.5 * rate * sy) < 1e-9);
    }
    const auto local = counter_diabatic(h0, 1e-3, false);
    CHECK(max_abs(local.matrix(1.3) - 0.5 * rate * sy) < 1e-9);
    CHECK(max_abs(local.matrix(0.0) - 0.5 * rate * sy) < 1e-8);
}

TEST_CASE("bare driving keeps the initial eigenvector on its branch") {
    const pulses::StirapPulseParams p{.beta = 0.3};
    const auto h0 = reduction::h_eff_resonant(model::DrivePulses::from(p)).hamiltonian;
    const auto trace = spectral_trace(h0, uniform_grid(p.t_final, 3500));
    // Bare driving is linear in the derivative, so RK4 on the grid needs the
    // operator between grid points; interpolate linearly.
    auto bare = TimeDependentOperator::from_function(3, p.t_final, [&trace](double t) {
        const double h = trace.times[1] - trace.times[0];
        const auto i = std::min(static_cast<std::size_t>(t / h), trace.size() - 2);
        const double w = t / h - static_cast<double>(i);
        return Matrix((1.0 - w) * bare_driving(trace, i).matrix() +
                      w * bare_driving(trace, i + 1).matrix());
    });
    dynamics::EvolutionOptions opts;
    opts.dt = 0.01;
    opts.samples = 35;
    for (Eigen::Index n = 0; n < 3; ++n) {
        const auto r = dynamics::schrodinger_evolve(bare, Ket(Vector(trace.vectors[0].col(n))),
                                                    p.t_final, opts);
        double worst = 0.0;
        for (std::size_t s = 0; s < r.times.size(); ++s) {
            const auto i = static_cast<std::size_t>(std::lround(r.times[s] / (p.t_final / 3500)));
            worst = std::max(worst, 1.0 - std::norm(trace.vectors[i].col(n).dot(
                                              r.states[s].amplitudes)));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("adiabatic phase matches slow evolution") {
    const double tf = 400.0;
    const auto h0 = rotating_field(2.0, std::numbers::pi / tf, tf);
    const auto trace = spectral_trace(h0, uniform_grid(tf, 8000));
    dynamics::EvolutionOptions opts;
    opts.dt = 0.01;
    opts.samples = 8;
    const auto r = dynamics::schrodinger_evolve(h0, Ket(Vector(trace.vectors[0].col(0))), tf, opts);
    for (std::size_t s = 1; s < r.times.size(); ++s) {
        const auto i = static_cast<std::size_t>(std::lround(r.times[s] / (tf / 8000)));
        const double actual = std::arg(trace.vectors[i].col(0).dot(r.states[s].amplitudes));
        double diff = std::remainder(actual - trace.phases[i](0), 2.0 * std::numbers::pi);
        CHECK(std::abs(diff) < 0.05);
    }
}

TEST_CASE("trace errors") {
    TimeDependentOperator flat(2, 1.0);
    flat.add_static(Matrix::Identity(2, 2));
    CHECK_THROWS_AS(spectral_trace(flat, uniform_grid(1.0, 10)), std::runtime_error);

    // level crossing at t = 0.5
    Matrix sz = Matrix::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    TimeDependentOperator cross(2, 1.0);
    cross.add_term([](double t) { return Complex(t - 0.5); }, sz);
    try {
        spectral_trace(cross, uniform_grid(1.0, 10));
        FAIL("expected a degeneracy error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("t = 0.5") != std::string::npos);
    }

    CHECK_THROWS_AS(spectral_trace(constant_generator(), {0.0, 1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(spectral_trace(constant_generator(), {0.0, 1.0, 2.0, 3.5, 4.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(counter_diabatic(constant_generator(), 2.0, true), std::invalid_argument);
}

TEST_CASE("gauge invariance") {
    const pulses::StirapPulseParams p{.beta = 0.2};
    const auto h0 = reduction::h_eff_resonant(model::DrivePulses::from(p)).hamiltonian;
    const auto grid = uniform_grid(p.t_final, 1000);
    TraceOptions opts;
    opts.initial_phases = {0.3, 2.1, -1.4};
    const auto a = spectral_trace(h0, grid);
    const auto b = spectral_trace(h0, grid, opts);
    for (std::size_t i = 0; i < grid.size(); i += 50) {
        REQUIRE(max_abs(cdd_correction(a, i).matrix() - cdd_correction(b, i).matrix()) < 1e-8);
    }
}

TEST_CASE("resolution check") {
    const pulses::StirapPulseParams p{};
    const auto h0 = reduction::h_eff_resonant(model::DrivePulses::from(p)).hamiltonian;
    const auto fine = richardson_check(h0, 17.5, 1e-4 * p.t_final);
    CHECK(fine.deviation < 1e-6);
    CHECK_FALSE(fine.warning);
    const auto coarse = richardson_check(h0, 17.5, 0.2 * p.t_final);
    CHECK(coarse.warning);
}

TEST_CASE("property suite") {
    const auto results = checks::tqd_property_suite();
    REQUIRE(results.size() == 5);
    for (const auto& r : results) {
        INFO(r.name << " = " << r.value);
        CHECK(r.passed);
    }
}
