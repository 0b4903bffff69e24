#include "stapghz/checks.hpp"

#include "stapghz/dynamics.hpp"
#include "stapghz/reduction.hpp"
#include "stapghz/tqd.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

namespace stap::checks {

using hilbert::Ket;
using hilbert::TimeDependentOperator;

std::vector<GaugeRow> gauge_table(const pulses::StirapPulseParams& base,
                                  const std::vector<double>& t_finals) {
    std::vector<GaugeRow> rows;
    for (double tf : t_finals) {
        auto p = base;
        p.t_final = tf;
        rows.push_back({tf, pulses::adiabaticity_gauge(pulses::mixing_angle(p))});
    }
    return rows;
}

std::vector<ZenoRow> zeno_table(const pulses::StirapPulseParams& base,
                                const std::vector<double>& omega0s, double area) {
    std::vector<ZenoRow> rows;
    for (double w : omega0s) {
        auto p = base;
        p.omega0 = w;
        p.t_final = area / w;
        const auto drive = model::DrivePulses::from(p);
        const double ratio = pulses::grid_peak(p.t_final, 2001, [&](double t) {
            return std::max(drive.omega1(t), drive.omega3(t));
        }) / std::sqrt(3.0);
        rows.push_back({w, p.t_final, ratio, reduction::zeno_discrepancy(p)});
    }
    return rows;
}

bool decreasing_with_omega0(const std::vector<ZenoRow>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (rows[j].omega0 < rows[i].omega0 && !(rows[j].discrepancy < rows[i].discrepancy)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<EquivalenceRow> equivalence_table(const pulses::StirapPulseParams& pulse,
                                              double detuning, int points) {
    const auto mixing = pulses::mixing_angle(pulse);
    const auto apf = pulses::synthesize_apf(mixing, detuning, pulse.beta);
    const auto eff = reduction::h_eff_final(apf);
    const auto cdd = reduction::cdd_hamiltonian(mixing, pulse.beta);
    std::vector<EquivalenceRow> rows;
    for (int i = 0; i < points; ++i) {
        const double t = pulse.t_final * i / (points - 1);
        rows.push_back(
            {t, hilbert::max_abs(eff.hamiltonian.matrix(t) - cdd.hamiltonian.matrix(t))});
    }
    return rows;
}

double cdd_engine_deviation(const pulses::StirapPulseParams& pulse) {
    const auto drive = model::DrivePulses::from(pulse);
    const auto h0 = reduction::h_eff_resonant(drive).hamiltonian;
    const auto cdd = reduction::cdd_hamiltonian(pulses::mixing_angle(pulse), pulse.beta);
    const auto trace = tqd::spectral_trace(h0, tqd::uniform_grid(pulse.t_final, 10000));
    double worst = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const Matrix d = tqd::cdd_correction(trace, i).matrix() - cdd.hamiltonian.matrix(trace.times[i]);
        worst = std::max(worst, hilbert::max_abs(d));
    }
    return worst;
}

double rk4_convergence_factor(double coupling, double t_final, double dt) {
    Matrix sx = Matrix::Zero(2, 2);
    sx(0, 1) = coupling;
    sx(1, 0) = coupling;
    TimeDependentOperator h(2, t_final);
    h.add_static(sx);
    Vector v = Vector::Zero(2);
    v(0) = 1.0;
    auto error = [&](double step) {
        dynamics::EvolutionOptions opts;
        opts.dt = step;
        opts.samples = 1;
        const auto r = dynamics::schrodinger_evolve(h, Ket(v), t_final, opts);
        Vector exact(2);
        exact << std::cos(coupling * t_final), -kI * std::sin(coupling * t_final);
        return (r.final_state().amplitudes - exact).norm();
    };
    return error(dt) / error(0.5 * dt);
}

namespace {

Matrix random_hermitian(std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> n(0.0, scale);
    Matrix a(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            a(i, j) = Complex(n(rng), n(rng));
        }
    }
    return 0.5 * (a + a.adjoint());
}

struct RandomGenerator {
    TimeDependentOperator h0;
    double t_final;
};

// Well-separated diagonal plus smooth oscillating Hermitian couplings.
RandomGenerator random_generator(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double tf = 0.5 + 4.5 * u(rng);
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = -2.0;
    d(2, 2) = 2.0;
    const Matrix a = random_hermitian(rng, 0.25);
    const Matrix b = random_hermitian(rng, 0.25);
    const double wa = (1.0 + 3.0 * u(rng)) / tf;
    const double wb = (1.0 + 3.0 * u(rng)) / tf;
    const double pa = 2.0 * std::numbers::pi * u(rng);
    TimeDependentOperator h(3, tf);
    h.add_static(d);
    h.add_term([wa, pa](double t) { return Complex(std::cos(wa * t + pa)); }, a);
    h.add_term([wb](double t) { return Complex(std::sin(wb * t)); }, b);
    return {h, tf};
}

Matrix eigenvectors(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> s(h);
    return s.eigenvectors();
}

} // namespace

std::vector<PropertyResult> tqd_property_suite(const TqdSuiteOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);

    double leakage = 0.0;
    double gauge = 0.0;
    for (int k = 0; k < options.instances; ++k) {
        const auto g = random_generator(rng);
        const auto h = tqd::counter_diabatic(g.h0, 1e-3 * g.t_final, true);
        dynamics::EvolutionOptions opts;
        opts.dt = options.dt;
        opts.samples = 50;
        const Matrix start = eigenvectors(g.h0.matrix(0.0));
        for (Eigen::Index n = 0; n < 3; ++n) {
            const auto r = dynamics::schrodinger_evolve(h, Ket(start.col(n)), g.t_final, opts);
            for (std::size_t i = 0; i < r.times.size(); ++i) {
                const Matrix v = eigenvectors(g.h0.matrix(r.times[i]));
                const double p = std::norm(v.col(n).dot(r.states[i].amplitudes));
                leakage = std::max(leakage, 1.0 - p);
            }
        }

        const auto grid = tqd::uniform_grid(g.t_final, 400);
        const auto plain = tqd::spectral_trace(g.h0, grid);
        tqd::TraceOptions rephased;
        rephased.initial_phases = {u(rng), u(rng), u(rng)};
        const auto other = tqd::spectral_trace(g.h0, grid, rephased);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            gauge = std::max(gauge, hilbert::max_abs(tqd::cdd_correction(plain, i).matrix() -
                                                     tqd::cdd_correction(other, i).matrix()));
        }
    }

    const pulses::StirapPulseParams pulse{};
    double equivalence = 0.0;
    for (const auto& row : equivalence_table(pulse, 2.2)) {
        equivalence = std::max(equivalence, row.deviation);
    }
    const double engine = cdd_engine_deviation(pulse);
    const double order = rk4_convergence_factor();

    auto below = [](std::string name, double v, double limit) {
        return PropertyResult{std::move(name), v, limit, v < limit};
    };
    std::vector<PropertyResult> out;
    out.push_back(below("transitionless leakage", leakage, 1e-6));
    out.push_back(below("gauge invariance of H1", gauge, 1e-8));
    out.push_back(below("engine vs analytic counter-diabatic term", engine, 1e-8));
    out.push_back(below("detuned effective vs counter-diabatic", equivalence, 1e-10));
    out.push_back(PropertyResult{"rk4 convergence factor", order, 22.0,
                                 order >= 10.0 && order <= 22.0});
    return out;
}

} // namespace stap::checks
