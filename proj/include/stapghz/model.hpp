// Hamiltonians, target state and dissipators of the three-atom,
// two-mode cavity system.

#pragma once

#include "stapghz/hilbert.hpp"
#include "stapghz/pulses.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace stap::model {

using hilbert::Ket;
using hilbert::Operator;
using hilbert::StateSpace;
using hilbert::TimeDependentOperator;

// Couplings and the detuning of excited levels, in units of λ.
struct ModelParams {
    double lambda_left{1.0};
    double lambda_right{1.0};
    double detuning{0.0};

    void validate() const;
};

struct NoiseParams {
    double kappa_left{0.0};
    double kappa_right{0.0};
    // γ₁…γ₆: atom-1 e→f, e→g_l; atom-2 e→g_l, e→g_r; atom-3 e→f, e→g_r.
    std::array<double, 6> gamma{};

    // κ_l = κ_r = κ and γ_n = γ/2.
    static NoiseParams uniform(double kappa, double gamma);

    bool is_zero() const;
    void validate() const;
};

struct LindbladSet {
    std::vector<Operator> operators; // √rate already folded in
    std::vector<std::string> labels;

    std::size_t size() const { return operators.size(); }
};

// Resonant laser drive pair with relative phase β; Ω₁ acts on atom 1, Ω₃ on atom 3.
struct DrivePulses {
    std::function<double(double)> omega1;
    std::function<double(double)> omega3;
    double beta{0.0};
    double t_final{0.0};

    static DrivePulses from(const pulses::StirapPulseParams& p);
};

// Indices 0..6 hold ψ₁…ψ₇.
std::array<hilbert::BasisState, 7> single_excitation_states();
std::array<Ket, 7> single_excitation_basis(const StateSpace& space);

// Σ_{atoms 1,2} λ_l a_l |e⟩⟨g_l| + Σ_{atoms 2,3} λ_r a_r |e⟩⟨g_r| + H.c.
Operator atom_cavity_coupling(const StateSpace& space, const ModelParams& params);

TimeDependentOperator build_H_I(const StateSpace& space, const DrivePulses& drive,
                                const ModelParams& params);

// Both f↔e transitions driven by Ω̃, atom 3 with phase β′; Δ on every |e⟩.
TimeDependentOperator build_H_I_prime(const StateSpace& space, const pulses::ApfPulse& apf,
                                      const ModelParams& params);

// L₁ = √κ_l a_l, L₂ = √κ_r a_r, L₃…L₈ = √γ_n |lower⟩⟨e| per atom branch.
LindbladSet build_lindblad_set(const StateSpace& space, const NoiseParams& noise);

// (|ψ₁⟩ − e^{iβ}|ψ₇⟩)/√2.
Ket ghz_state(const StateSpace& space, double beta);

} // namespace stap::model
