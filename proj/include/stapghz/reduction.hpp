// Zeno projection of the cavity model onto the dark
// interior mode, the effective three-level Hamiltonians and the analytic
// counter-diabatic term.
//
// Effective models use the ordered basis (ψ₁, φ₀, ψ₇). The reduced 7-state
// Hamiltonian uses (ψ₁, ψ₇, φ₀, φ₁, φ₂, φ₃, φ₄).

#pragma once

#include "stapghz/hilbert.hpp"
#include "stapghz/model.hpp"
#include "stapghz/pulses.hpp"

#include <array>
#include <string>
#include <vector>

namespace stap::reduction {

using hilbert::Ket;
using hilbert::Operator;
using hilbert::StateSpace;
using hilbert::TimeDependentOperator;

inline constexpr Eigen::Index kPsi1 = 0;
inline constexpr Eigen::Index kPhi0 = 1;
inline constexpr Eigen::Index kPsi7 = 2;

struct ZenoDecomposition {
    // ε₀ = 0, ε₁ = λ, ε₂ = −λ, ε₃ = √3λ, ε₄ = −√3λ at λ_l = λ_r = λ.
    std::array<double, 5> eps{};
    // φ_k in the full space, phased so ⟨ψ₂|φ_k⟩ > 0.
    std::array<Ket, 5> phi;
    // coefficients(j, k) = ⟨ψ_{j+2}|φ_k⟩.
    Matrix coefficients;
    // Full-space columns ψ₁, ψ₇, φ₀…φ₄.
    Matrix basis;
    // Projectors onto the eigenspaces of the coupling within the 7-state
    // subspace: {ψ₁, ψ₇, φ₀} for ε = 0, then one per φ₁…φ₄.
    std::vector<Operator> projectors;
};

// Diagonalizes the atom-cavity coupling on span{ψ₂…ψ₆}. Throws
// std::runtime_error on near-degenerate interior spectra and
// NumericalToleranceError when λ_l = λ_r but the spectrum misses
// {0, ±λ, ±√3λ} by more than 1e-10.
ZenoDecomposition zeno_decompose(const StateSpace& space, const model::ModelParams& params);

// Σ_k ε_k |φ_k⟩⟨φ_k| plus the laser couplings projected on the 7-state
// subspace, built channel by channel from the φ_k overlaps.
TimeDependentOperator h_re(const ZenoDecomposition& zeno, const model::DrivePulses& drive);

enum class Variant { resonant, nonresonant, eliminated, final, cdd };

std::string to_string(Variant v);

struct EffectiveModel {
    Variant variant;
    TimeDependentOperator hamiltonian;
    // Largest Ω/(√3λ) (resonant) or Ω̃/(√3Δ) (detuned) over the pulse.
    double validity_ratio{0.0};
};

// (1/√3)|φ₀⟩(Ω₁⟨ψ₁| + e^{iβ}Ω₃⟨ψ₇|) + H.c., with λ = 1.
EffectiveModel h_eff_resonant(const model::DrivePulses& drive);

struct EffectiveEigensystem {
    Eigen::Vector3cd n0;
    Eigen::Vector3cd n_plus;
    Eigen::Vector3cd n_minus;
    std::array<double, 3> eta{}; // 0, +Ω/√3, −Ω/√3
};

// Dark state n₀ = (cos θ, 0, −e^{−iβ} sin θ) and bright states
// n± = (sin θ, ±1, e^{−iβ} cos θ)/√2 at time t.
EffectiveEigensystem effective_eigensystem(const pulses::MixingAngle& mixing, double t,
                                           double beta);

// iθ̇ e^{iβ}|ψ₁⟩⟨ψ₇| + H.c., which transports every eigenvector of the
// resonant effective Hamiltonian; the φ₀ row and column vanish.
EffectiveModel cdd_hamiltonian(const pulses::MixingAngle& mixing, double beta);

// Detuned three-level model with Δ|φ₀⟩⟨φ₀|.
EffectiveModel h_eff_nonresonant(const pulses::ApfPulse& apf);
// Second-order elimination of φ₀: −V†V/Δ with V = ⟨φ₀|H|·⟩.
EffectiveModel adiabatic_eliminate(const pulses::ApfPulse& apf);
// Elimination result with the equal Stark shifts dropped:
// e^{iβ′}Ω_x|ψ₁⟩⟨ψ₇| + H.c., Ω_x = −Ω̃²/(3Δ).
EffectiveModel h_eff_final(const pulses::ApfPulse& apf);

// Sup over the run of the population differences on ψ₁ and ψ₇ between the
// full resonant model and h_eff_resonant, both started in ψ₁.
double zeno_discrepancy(const pulses::StirapPulseParams& pulse, double dt = 0.005,
                        int samples = 400);

} // namespace stap::reduction
