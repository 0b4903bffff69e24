// Fixed-step RK4 propagation of kets and of the Lindblad
// master equation, and the population/fidelity observables.

#pragma once

#include "stapghz/hilbert.hpp"
#include "stapghz/model.hpp"

#include <string>
#include <vector>

namespace stap::dynamics {

using hilbert::DensityMatrix;
using hilbert::Ket;
using hilbert::TimeDependentOperator;

struct EvolutionOptions {
    double dt{0.005};
    // Number of output intervals; states are stored at samples + 1 times.
    int samples{100};
    // Re-run at dt/2 and report the final-state difference.
    bool check_convergence{false};
    // Failure thresholds.
    double max_norm_drift{1e-5};
    double max_trace_drift{1e-7};
    double min_eigenvalue{-1e-8};
    double max_hermiticity_error{1e-10};
};

struct Diagnostics {
    int steps{0};
    double dt{0.0};
    double max_norm_drift{0.0};
    double max_trace_drift{0.0};
    double max_hermiticity_error{0.0};
    double min_eigenvalue{1.0};
    double convergence_error{-1.0}; // < 0 when not checked
    std::vector<std::string> warnings;
};

struct KetEvolution {
    std::vector<double> times;
    std::vector<Ket> states;
    Diagnostics diagnostics;

    const Ket& final_state() const { return states.back(); }
};

struct DensityEvolution {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    Diagnostics diagnostics;

    const DensityMatrix& final_state() const { return states.back(); }
};

// i∂ₜψ = H(t)ψ. Throws std::invalid_argument when dt·max|H| ≥ 0.1 and
// NumericalToleranceError when the norm drifts past options.max_norm_drift.
KetEvolution schrodinger_evolve(const TimeDependentOperator& h, const Ket& psi0, double t_final,
                                const EvolutionOptions& options = {});

// ρ̇ = i[ρ,H] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ}).
DensityEvolution lindblad_evolve(const TimeDependentOperator& h, const model::LindbladSet& jumps,
                                 const DensityMatrix& rho0, double t_final,
                                 const EvolutionOptions& options = {});

// |⟨target|ρ|target⟩| and |⟨target|ψ⟩|².
double population(const DensityMatrix& rho, const Ket& target);
double population(const Ket& psi, const Ket& target);

// Population of the GHZ target, |⟨GHZ|ρ|GHZ⟩|. This is not the Uhlmann fidelity.
double fidelity(const DensityMatrix& rho, const Ket& ghz);
double fidelity(const Ket& psi, const Ket& ghz);
double fidelity(const hilbert::StateSpace& space, const DensityMatrix& rho, double beta);

} // namespace stap::dynamics
