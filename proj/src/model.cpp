#include "stapghz/model.hpp"

#include <cmath>
#include <stdexcept>

namespace stap::model {

using hilbert::BasisState;
using hilbert::Level;
using hilbert::Mode;
using hilbert::atomic_transition;
using hilbert::annihilator;

void ModelParams::validate() const {
    if (!(lambda_left > 0.0) || !(lambda_right > 0.0)) {
        throw std::invalid_argument("cavity couplings must be > 0");
    }
    if (!std::isfinite(detuning)) {
        throw std::invalid_argument("detuning must be finite");
    }
}

NoiseParams NoiseParams::uniform(double kappa, double gamma) {
    NoiseParams n;
    n.kappa_left = kappa;
    n.kappa_right = kappa;
    n.gamma.fill(gamma / 2.0);
    return n;
}

bool NoiseParams::is_zero() const {
    if (kappa_left != 0.0 || kappa_right != 0.0) {
        return false;
    }
    for (double g : gamma) {
        if (g != 0.0) {
            return false;
        }
    }
    return true;
}

void NoiseParams::validate() const {
    if (kappa_left < 0.0 || kappa_right < 0.0) {
        throw std::invalid_argument("cavity decay rates must be >= 0");
    }
    for (double g : gamma) {
        if (g < 0.0) {
            throw std::invalid_argument("atomic decay rates must be >= 0");
        }
    }
}

DrivePulses DrivePulses::from(const pulses::StirapPulseParams& p) {
    p.validate();
    return DrivePulses{[p](double t) { return pulses::omega1(p, t); },
                       [p](double t) { return pulses::omega3(p, t); }, p.beta, p.t_final};
}

std::array<BasisState, 7> single_excitation_states() {
    return {
        BasisState{{Level::f, Level::gl, Level::gr}, 0, 0},
        BasisState{{Level::e, Level::gl, Level::gr}, 0, 0},
        BasisState{{Level::gl, Level::gl, Level::gr}, 1, 0},
        BasisState{{Level::gl, Level::e, Level::gr}, 0, 0},
        BasisState{{Level::gl, Level::gr, Level::gr}, 0, 1},
        BasisState{{Level::gl, Level::gr, Level::e}, 0, 0},
        BasisState{{Level::gl, Level::gr, Level::f}, 0, 0},
    };
}

std::array<Ket, 7> single_excitation_basis(const StateSpace& space) {
    const auto states = single_excitation_states();
    std::array<Ket, 7> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        out[i] = Ket::basis(space, states[i]);
    }
    return out;
}

Operator atom_cavity_coupling(const StateSpace& space, const ModelParams& params) {
    params.validate();
    const Matrix al = annihilator(space, Mode::left).matrix();
    const Matrix ar = annihilator(space, Mode::right).matrix();
    Matrix h = params.lambda_left * al *
                   (atomic_transition(space, 1, Level::gl, Level::e).matrix() +
                    atomic_transition(space, 2, Level::gl, Level::e).matrix()) +
               params.lambda_right * ar *
                   (atomic_transition(space, 2, Level::gr, Level::e).matrix() +
                    atomic_transition(space, 3, Level::gr, Level::e).matrix());
    Matrix full = h + h.adjoint();
    return Operator(std::move(full), true);
}

TimeDependentOperator build_H_I(const StateSpace& space, const DrivePulses& drive,
                                const ModelParams& params) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    TimeDependentOperator h(d, drive.t_final);
    h.add_static(atom_cavity_coupling(space, params).matrix());

    const Matrix e1f = atomic_transition(space, 1, Level::f, Level::e).matrix();
    const Matrix e3f = atomic_transition(space, 3, Level::f, Level::e).matrix();
    const Complex phase = std::polar(1.0, drive.beta);
    auto o1 = drive.omega1;
    auto o3 = drive.omega3;
    h.add_term([o1](double t) { return Complex(o1(t)); }, e1f + Matrix(e1f.adjoint()));
    h.add_term([o3](double t) { return Complex(o3(t)); },
               phase * e3f + std::conj(phase) * Matrix(e3f.adjoint()));
    return h;
}

TimeDependentOperator build_H_I_prime(const StateSpace& space, const pulses::ApfPulse& apf,
                                      const ModelParams& params) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    TimeDependentOperator h(d, apf.t_final());
    h.add_static(atom_cavity_coupling(space, params).matrix());

    Matrix excited = Matrix::Zero(d, d);
    for (int atom = 1; atom <= 3; ++atom) {
        excited += atomic_transition(space, atom, Level::e, Level::e).matrix();
    }
    h.add_static(params.detuning * excited);

    const Matrix e1f = atomic_transition(space, 1, Level::f, Level::e).matrix();
    const Matrix e3f = atomic_transition(space, 3, Level::f, Level::e).matrix();
    const Complex phase = std::polar(1.0, apf.beta_prime);
    Matrix drive = e1f + phase * e3f;
    drive += Matrix(drive.adjoint());
    h.add_term([apf](double t) { return Complex(apf.omega_tilde(t)); }, drive);
    return h;
}

LindbladSet build_lindblad_set(const StateSpace& space, const NoiseParams& noise) {
    noise.validate();
    LindbladSet set;
    auto push = [&](double rate, const Operator& op, std::string label) {
        set.operators.push_back(std::sqrt(rate) * op);
        set.labels.push_back(std::move(label));
    };
    push(noise.kappa_left, annihilator(space, Mode::left), "kappa_l a_l");
    push(noise.kappa_right, annihilator(space, Mode::right), "kappa_r a_r");

    struct Branch {
        int atom;
        Level lower;
        const char* label;
    };
    constexpr std::array<Branch, 6> branches{{
        {1, Level::f, "gamma_1 |f>_1<e|"},
        {1, Level::gl, "gamma_2 |g_l>_1<e|"},
        {2, Level::gl, "gamma_3 |g_l>_2<e|"},
        {2, Level::gr, "gamma_4 |g_r>_2<e|"},
        {3, Level::f, "gamma_5 |f>_3<e|"},
        {3, Level::gr, "gamma_6 |g_r>_3<e|"},
    }};
    for (std::size_t n = 0; n < branches.size(); ++n) {
        const auto& b = branches[n];
        push(noise.gamma[n], atomic_transition(space, b.atom, Level::e, b.lower), b.label);
    }
    return set;
}

Ket ghz_state(const StateSpace& space, double beta) {
    const auto basis = single_excitation_basis(space);
    Vector v = (basis[0].amplitudes - std::polar(1.0, beta) * basis[6].amplitudes) /
               std::sqrt(2.0);
    return Ket(std::move(v));
}

} // namespace stap::model
