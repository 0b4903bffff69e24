// Transitionless driving for small Hermitian generators H₀(t).
//
// Eigenvectors are followed along a time grid by maximal overlap and kept in
// the discrete parallel-transport gauge (⟨φ_n(t_i)|φ_n(t_{i+1})⟩ > 0).
// Derivatives are fourth-order finite differences on that grid.

#pragma once

#include "stapghz/hilbert.hpp"

#include <cstddef>
#include <vector>

namespace stap::tqd {

using hilbert::Operator;
using hilbert::TimeDependentOperator;

struct TraceOptions {
    // Degeneracy threshold relative to max|ζ|.
    double relative_gap{1e-8};
    // Branch matching fails when the best two overlaps are this close.
    double ambiguity{1e-3};
    // Optional phases e^{iχ_n} applied to the eigenvectors at the first grid point.
    std::vector<double> initial_phases;
};

struct SpectralTrace {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> energies; // ζ_n(t_i), one entry per branch
    std::vector<Matrix> vectors;           // columns φ_n(t_i)
    std::vector<Eigen::VectorXd> phases;   // ϑ_n(t_i)
    double min_gap{0.0};

    std::size_t size() const { return times.size(); }
    Eigen::Index levels() const { return vectors.empty() ? 0 : vectors.front().cols(); }
    // Finite-difference ∂ₜφ_n at grid point i (columns).
    Matrix derivative(std::size_t i) const;
};

std::vector<double> uniform_grid(double t_final, int intervals);

// Throws std::runtime_error naming the time point on degeneracy or
// ambiguous branch matching.
SpectralTrace spectral_trace(const TimeDependentOperator& h0, const std::vector<double>& grid,
                             const TraceOptions& options = {});

// H₁ = iΣ_n (|∂ₜφ_n⟩⟨φ_n| − ⟨φ_n|∂ₜφ_n⟩|φ_n⟩⟨φ_n|), Hermitian part.
Operator cdd_correction(const SpectralTrace& trace, std::size_t i);

// H = iΣ_n |∂ₜφ_n⟩⟨φ_n| in the gauge carried by the trace, Hermitian part.
Operator bare_driving(const SpectralTrace& trace, std::size_t i);

// Continuous-time H₁(t) (plus H₀(t) when include_reference) evaluated with a
// local five-point stencil of spacing `step` around each requested t.
TimeDependentOperator counter_diabatic(const TimeDependentOperator& h0, double step,
                                       bool include_reference);

struct ResolutionCheck {
    double deviation{0.0}; // max|H₁(step) − H₁(step/2)|
    bool warning{false};   // deviation > 1e-6
};

ResolutionCheck richardson_check(const TimeDependentOperator& h0, double t, double step);

} // namespace stap::tqd
