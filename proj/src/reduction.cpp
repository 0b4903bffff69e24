#include "stapghz/reduction.hpp"

#include "stapghz/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stap::reduction {

namespace {

const double kSqrt3 = std::sqrt(3.0);

template <typename F>
double sup_on_grid(double t_final, F&& f) {
    return pulses::grid_peak(t_final, 2001, f);
}

// |a⟩⟨b| + |b⟩⟨a| in the effective basis, with amplitude c on |a⟩⟨b|.
Matrix hermitian_pair(Eigen::Index a, Eigen::Index b, Complex c) {
    Matrix m = Matrix::Zero(3, 3);
    m(a, b) = c;
    m(b, a) = std::conj(c);
    return m;
}

} // namespace

std::string to_string(Variant v) {
    switch (v) {
    case Variant::resonant:
        return "resonant";
    case Variant::nonresonant:
        return "nonresonant";
    case Variant::eliminated:
        return "eliminated";
    case Variant::final:
        return "final";
    case Variant::cdd:
        return "cdd";
    }
    return "?";
}

ZenoDecomposition zeno_decompose(const StateSpace& space, const model::ModelParams& params) {
    params.validate();
    const auto basis = model::single_excitation_basis(space);
    const Matrix coupling = model::atom_cavity_coupling(space, params).matrix();

    Matrix interior(static_cast<Eigen::Index>(space.dim()), 5);
    for (int k = 0; k < 5; ++k) {
        interior.col(k) = basis[static_cast<std::size_t>(k + 1)].amplitudes;
    }
    const Matrix restricted = interior.adjoint() * coupling * interior;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(restricted);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("zeno_decompose: diagonalization failed");
    }
    const Eigen::VectorXd& evals = solver.eigenvalues(); // ascending
    const double scale = std::max(params.lambda_left, params.lambda_right);
    for (int k = 0; k + 1 < 5; ++k) {
        if (evals(k + 1) - evals(k) < 1e-8 * scale) {
            throw std::runtime_error("zeno_decompose: near-degenerate interior spectrum");
        }
    }

    // Ascending order −√3λ, −λ, 0, λ, √3λ maps onto ε₄, ε₂, ε₀, ε₁, ε₃.
    constexpr std::array<int, 5> slot{4, 2, 0, 1, 3};
    ZenoDecomposition z;
    z.coefficients.resize(5, 5);
    for (int k = 0; k < 5; ++k) {
        Vector v = solver.eigenvectors().col(k);
        const Complex lead = v(0);
        if (std::abs(lead) > 0.0) {
            v *= std::conj(lead) / std::abs(lead);
        }
        const int s = slot[static_cast<std::size_t>(k)];
        z.eps[static_cast<std::size_t>(s)] = evals(k);
        z.coefficients.col(s) = v;
        z.phi[static_cast<std::size_t>(s)] = Ket(interior * v);
    }

    if (params.lambda_left == params.lambda_right) {
        const double lam = params.lambda_left;
        const std::array<double, 5> analytic{0.0, lam, -lam, kSqrt3 * lam, -kSqrt3 * lam};
        for (std::size_t k = 0; k < 5; ++k) {
            if (std::abs(z.eps[k] - analytic[k]) > 1e-10) {
                std::ostringstream os;
                os << "zeno_decompose: eigenvalue eps_" << k << " = " << z.eps[k]
                   << " deviates from " << analytic[k];
                throw NumericalToleranceError(os.str());
            }
        }
    }

    z.basis.resize(static_cast<Eigen::Index>(space.dim()), 7);
    z.basis.col(0) = basis[0].amplitudes;
    z.basis.col(1) = basis[6].amplitudes;
    for (int k = 0; k < 5; ++k) {
        z.basis.col(k + 2) = z.phi[static_cast<std::size_t>(k)].amplitudes;
    }

    auto projector = [&](std::initializer_list<Eigen::Index> cols) {
        Matrix p = Matrix::Zero(z.basis.rows(), z.basis.rows());
        for (auto c : cols) {
            p += z.basis.col(c) * z.basis.col(c).adjoint();
        }
        return Operator(std::move(p), true);
    };
    z.projectors.push_back(projector({0, 1, 2}));
    for (Eigen::Index c = 3; c < 7; ++c) {
        z.projectors.push_back(projector({c}));
    }
    return z;
}

TimeDependentOperator h_re(const ZenoDecomposition& zeno, const model::DrivePulses& drive) {
    TimeDependentOperator h(7, drive.t_final);
    Matrix diag = Matrix::Zero(7, 7);
    for (int k = 0; k < 5; ++k) {
        diag(k + 2, k + 2) = zeno.eps[static_cast<std::size_t>(k)];
    }
    h.add_static(diag);

    // Ω₁ drives ψ₁ → ψ₂ and e^{iβ}Ω₃ drives ψ₇ → ψ₆, so the φ_k channels
    // carry ⟨φ_k|ψ₂⟩ and ⟨φ_k|ψ₆⟩.
    const Complex phase = std::polar(1.0, drive.beta);
    Matrix ch1 = Matrix::Zero(7, 7);
    Matrix ch3 = Matrix::Zero(7, 7);
    for (int k = 0; k < 5; ++k) {
        ch1(k + 2, 0) = std::conj(zeno.coefficients(0, k));
        ch3(k + 2, 1) = phase * std::conj(zeno.coefficients(4, k));
    }
    ch1 += Matrix(ch1.adjoint());
    ch3 += Matrix(ch3.adjoint());
    auto o1 = drive.omega1;
    auto o3 = drive.omega3;
    h.add_term([o1](double t) { return Complex(o1(t)); }, ch1);
    h.add_term([o3](double t) { return Complex(o3(t)); }, ch3);
    return h;
}

EffectiveModel h_eff_resonant(const model::DrivePulses& drive) {
    TimeDependentOperator h(3, drive.t_final);
    auto o1 = drive.omega1;
    auto o3 = drive.omega3;
    h.add_term([o1](double t) { return Complex(o1(t)); },
               hermitian_pair(kPhi0, kPsi1, 1.0 / kSqrt3));
    h.add_term([o3](double t) { return Complex(o3(t)); },
               hermitian_pair(kPhi0, kPsi7, std::polar(1.0 / kSqrt3, drive.beta)));
    const double ratio = sup_on_grid(drive.t_final, [&](double t) {
        return std::max(drive.omega1(t), drive.omega3(t)) / kSqrt3;
    });
    return EffectiveModel{Variant::resonant, std::move(h), ratio};
}

EffectiveEigensystem effective_eigensystem(const pulses::MixingAngle& mixing, double t,
                                           double beta) {
    const double omega = mixing.omega(t);
    if (!(omega > 0.0)) {
        throw std::domain_error("effective eigensystem undefined where Omega = 0");
    }
    const double th = mixing.theta(t);
    const double c = std::cos(th);
    const double s = std::sin(th);
    const Complex twist = std::polar(1.0, -beta);
    const double r = 1.0 / std::sqrt(2.0);
    EffectiveEigensystem e;
    e.n0 << c, 0.0, -twist * s;
    e.n_plus << r * s, r, r * twist * c;
    e.n_minus << r * s, -r, r * twist * c;
    e.eta = {0.0, omega / kSqrt3, -omega / kSqrt3};
    return e;
}

EffectiveModel cdd_hamiltonian(const pulses::MixingAngle& mixing, double beta) {
    TimeDependentOperator h(3, mixing.t_final());
    h.add_term([mixing](double t) { return Complex(mixing.theta_dot(t)); },
               hermitian_pair(kPsi1, kPsi7, kI * std::polar(1.0, beta)));
    return EffectiveModel{Variant::cdd, std::move(h), 0.0};
}

namespace {

double detuned_ratio(const pulses::ApfPulse& apf) {
    return sup_on_grid(apf.t_final(), [&](double t) { return apf.omega_tilde(t); }) /
           (kSqrt3 * apf.detuning);
}

void require_detuning(const pulses::ApfPulse& apf) {
    if (!(apf.detuning > 0.0)) {
        throw std::invalid_argument("adiabatic elimination requires detuning > 0");
    }
}

} // namespace

EffectiveModel h_eff_nonresonant(const pulses::ApfPulse& apf) {
    TimeDependentOperator h(3, apf.t_final());
    Matrix detuned = Matrix::Zero(3, 3);
    detuned(kPhi0, kPhi0) = apf.detuning;
    h.add_static(detuned);
    Matrix drive = hermitian_pair(kPhi0, kPsi1, 1.0 / kSqrt3) +
                   hermitian_pair(kPhi0, kPsi7, std::polar(1.0 / kSqrt3, apf.beta_prime));
    h.add_term([apf](double t) { return Complex(apf.omega_tilde(t)); }, drive);
    return EffectiveModel{Variant::nonresonant, std::move(h), detuned_ratio(apf)};
}

EffectiveModel adiabatic_eliminate(const pulses::ApfPulse& apf) {
    require_detuning(apf);
    // V = (Ω̃/√3)(⟨ψ₁| + e^{iβ′}⟨ψ₇|); −V†V/Δ = −(Ω̃²/3Δ) [u u†], u = (1, 0, e^{−iβ′}).
    Eigen::Vector3cd u(1.0, 0.0, std::polar(1.0, -apf.beta_prime));
    const Matrix shape = -(u * u.adjoint()) / (3.0 * apf.detuning);
    TimeDependentOperator h(3, apf.t_final());
    h.add_term(
        [apf](double t) {
            const double w = apf.omega_tilde(t);
            return Complex(w * w);
        },
        shape);
    return EffectiveModel{Variant::eliminated, std::move(h), detuned_ratio(apf)};
}

EffectiveModel h_eff_final(const pulses::ApfPulse& apf) {
    require_detuning(apf);
    TimeDependentOperator h(3, apf.t_final());
    h.add_term(
        [apf](double t) {
            const double w = apf.omega_tilde(t);
            return Complex(-w * w / (3.0 * apf.detuning));
        },
        hermitian_pair(kPsi1, kPsi7, std::polar(1.0, apf.beta_prime)));
    return EffectiveModel{Variant::final, std::move(h), detuned_ratio(apf)};
}

double zeno_discrepancy(const pulses::StirapPulseParams& pulse, double dt, int samples) {
    const auto space = hilbert::enumerate_basis(1);
    const auto drive = model::DrivePulses::from(pulse);
    const auto full = model::build_H_I(space, drive, model::ModelParams{});
    const auto eff = h_eff_resonant(drive);
    const auto basis = model::single_excitation_basis(space);

    dynamics::EvolutionOptions opts;
    opts.dt = dt;
    opts.samples = samples;
    const auto a = dynamics::schrodinger_evolve(full, basis[0], pulse.t_final, opts);

    Vector start = Vector::Zero(3);
    start(kPsi1) = 1.0;
    const auto b = dynamics::schrodinger_evolve(eff.hamiltonian, Ket(start), pulse.t_final, opts);

    double worst = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        const auto& eff_amp = b.states[i].amplitudes;
        const double d1 =
            std::abs(dynamics::population(a.states[i], basis[0]) - std::norm(eff_amp(kPsi1)));
        const double d7 =
            std::abs(dynamics::population(a.states[i], basis[6]) - std::norm(eff_amp(kPsi7)));
        worst = std::max({worst, d1, d7});
    }
    return worst;
}

} // namespace stap::reduction
