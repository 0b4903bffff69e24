#include "stapghz/tqd.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stap::tqd {

namespace {

struct Stencil {
    std::array<int, 5> offsets;
    std::array<double, 5> weights; // divide by 12h
};

// Fourth-order first-derivative stencils, by position of the evaluation point.
constexpr Stencil kForward{{0, 1, 2, 3, 4}, {-25.0, 48.0, -36.0, 16.0, -3.0}};
constexpr Stencil kForwardOne{{-1, 0, 1, 2, 3}, {-3.0, -10.0, 18.0, -6.0, 1.0}};
constexpr Stencil kCentral{{-2, -1, 0, 1, 2}, {1.0, -8.0, 0.0, 8.0, -1.0}};
constexpr Stencil kBackwardOne{{-3, -2, -1, 0, 1}, {-1.0, 6.0, -18.0, 10.0, 3.0}};
constexpr Stencil kBackward{{-4, -3, -2, -1, 0}, {3.0, -16.0, 36.0, -48.0, 25.0}};

struct Eigensystem {
    Eigen::VectorXd values;
    Matrix vectors;
};

std::string at_time(double t) {
    std::ostringstream os;
    os << " at t = " << t;
    return os.str();
}

Eigensystem diagonalize(const Matrix& h, double t, double relative_gap) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("diagonalization failed" + at_time(t));
    }
    Eigensystem e{solver.eigenvalues(), solver.eigenvectors()};
    const double scale = e.values.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k + 1 < e.values.size(); ++k) {
        if (e.values(k + 1) - e.values(k) <= relative_gap * scale) {
            throw std::runtime_error("degenerate spectrum" + at_time(t));
        }
    }
    return e;
}

double spectral_gap(const Eigen::VectorXd& values) {
    Eigen::VectorXd sorted = values;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k + 1 < sorted.size(); ++k) {
        gap = std::min(gap, sorted(k + 1) - sorted(k));
    }
    return gap;
}

// Reorders and rephases `next` so each column continues the matching column
// of `reference` with a real positive overlap.
Eigensystem align(const Matrix& reference, const Eigensystem& next, double ambiguity, double t) {
    const Eigen::Index n = reference.cols();
    const Matrix overlaps = reference.adjoint() * next.vectors;
    Eigensystem out{Eigen::VectorXd(n), Matrix(reference.rows(), n)};
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (Eigen::Index p = 0; p < n; ++p) {
        Eigen::Index best = -1;
        double best_abs = -1.0;
        double second_abs = -1.0;
        for (Eigen::Index q = 0; q < n; ++q) {
            const double a = std::abs(overlaps(p, q));
            if (a > best_abs) {
                second_abs = best_abs;
                best_abs = a;
                best = q;
            } else if (a > second_abs) {
                second_abs = a;
            }
        }
        if (best_abs - second_abs < ambiguity || taken[static_cast<std::size_t>(best)]) {
            throw std::runtime_error("ambiguous eigenvector branch matching" + at_time(t));
        }
        taken[static_cast<std::size_t>(best)] = true;
        const Complex o = overlaps(p, best);
        out.values(p) = next.values(best);
        out.vectors.col(p) = next.vectors.col(best) * (std::conj(o) / std::abs(o));
    }
    return out;
}

const Stencil& stencil_for(std::size_t i, std::size_t n) {
    if (i == 0) {
        return kForward;
    }
    if (i == 1) {
        return kForwardOne;
    }
    if (i + 1 == n) {
        return kBackward;
    }
    if (i + 2 == n) {
        return kBackwardOne;
    }
    return kCentral;
}

Matrix correction_from(const Matrix& phi, const Matrix& dphi) {
    // i Σ (|∂φ⟩⟨φ| − ⟨φ|∂φ⟩|φ⟩⟨φ|)
    const Eigen::VectorXcd connection = (phi.adjoint() * dphi).diagonal();
    Matrix h = kI * (dphi * phi.adjoint() - phi * connection.asDiagonal() * phi.adjoint());
    return 0.5 * (h + h.adjoint());
}

Matrix bare_from(const Matrix& phi, const Matrix& dphi) {
    Matrix h = kI * dphi * phi.adjoint();
    return 0.5 * (h + h.adjoint());
}

} // namespace

std::vector<double> uniform_grid(double t_final, int intervals) {
    if (!(t_final > 0.0) || intervals < 1) {
        throw std::invalid_argument("uniform_grid: need t_final > 0 and intervals >= 1");
    }
    std::vector<double> grid(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) {
        grid[static_cast<std::size_t>(i)] = t_final * i / intervals;
    }
    return grid;
}

Matrix SpectralTrace::derivative(std::size_t i) const {
    const std::size_t n = times.size();
    if (n < 5) {
        throw std::invalid_argument("spectral trace needs at least 5 grid points");
    }
    if (i >= n) {
        throw std::out_of_range("grid index out of range");
    }
    const double h = times[1] - times[0];
    const Stencil& s = stencil_for(i, n);
    Matrix d = Matrix::Zero(vectors[i].rows(), vectors[i].cols());
    for (std::size_t k = 0; k < 5; ++k) {
        if (s.weights[k] == 0.0) {
            continue;
        }
        const auto j = static_cast<std::size_t>(static_cast<long>(i) + s.offsets[k]);
        d += s.weights[k] * vectors[j];
    }
    return d / (12.0 * h);
}

SpectralTrace spectral_trace(const TimeDependentOperator& h0, const std::vector<double>& grid,
                             const TraceOptions& options) {
    if (grid.size() < 5) {
        throw std::invalid_argument("spectral trace needs at least 5 grid points");
    }
    const double h = grid[1] - grid[0];
    if (!(h > 0.0)) {
        throw std::invalid_argument("grid must be increasing");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs((grid[i] - grid[i - 1]) - h) > 1e-9 * h) {
            throw std::invalid_argument("grid must be uniformly spaced");
        }
    }

    SpectralTrace trace;
    trace.times = grid;
    trace.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        Eigensystem e = diagonalize(h0.matrix(t), t, options.relative_gap);
        trace.min_gap = std::min(trace.min_gap, spectral_gap(e.values));
        if (i == 0) {
            const auto& chi = options.initial_phases;
            if (!chi.empty()) {
                if (static_cast<Eigen::Index>(chi.size()) != e.vectors.cols()) {
                    throw std::invalid_argument("initial_phases size must match dimension");
                }
                for (Eigen::Index n = 0; n < e.vectors.cols(); ++n) {
                    e.vectors.col(n) *= std::polar(1.0, chi[static_cast<std::size_t>(n)]);
                }
            }
        } else {
            e = align(trace.vectors.back(), e, options.ambiguity, t);
        }
        trace.energies.push_back(std::move(e.values));
        trace.vectors.push_back(std::move(e.vectors));
    }

    // ϑ_n = −∫ζ_n + i∫⟨φ_n|∂φ_n⟩, trapezoid rule.
    const Eigen::Index levels = trace.levels();
    Eigen::VectorXd integrand_prev(levels);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(levels);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const Eigen::VectorXcd conn = (trace.vectors[i].adjoint() * trace.derivative(i)).diagonal();
        Eigen::VectorXd integrand(levels);
        for (Eigen::Index n = 0; n < levels; ++n) {
            integrand(n) = -trace.energies[i](n) + (kI * conn(n)).real();
        }
        if (i > 0) {
            theta += 0.5 * h * (integrand + integrand_prev);
        }
        integrand_prev = integrand;
        trace.phases.push_back(theta);
    }
    return trace;
}

Operator cdd_correction(const SpectralTrace& trace, std::size_t i) {
    return Operator(correction_from(trace.vectors.at(i), trace.derivative(i)), true);
}

Operator bare_driving(const SpectralTrace& trace, std::size_t i) {
    return Operator(bare_from(trace.vectors.at(i), trace.derivative(i)), true);
}

namespace {

Matrix local_correction(const TimeDependentOperator& h0, double t, double step) {
    const double tf = h0.t_final();
    const Stencil* s = &kCentral;
    if (t - 2.0 * step < 0.0) {
        s = &kForward;
    } else if (t + 2.0 * step > tf) {
        s = &kBackward;
    }
    const Eigensystem centre = diagonalize(h0.matrix(t), t, 1e-8);
    Matrix dphi = Matrix::Zero(centre.vectors.rows(), centre.vectors.cols());
    for (std::size_t k = 0; k < 5; ++k) {
        if (s->weights[k] == 0.0) {
            continue;
        }
        const double tk = std::clamp(t + s->offsets[k] * step, 0.0, tf);
        const Eigensystem e =
            align(centre.vectors, diagonalize(h0.matrix(tk), tk, 1e-8), 1e-3, tk);
        dphi += s->weights[k] * e.vectors;
    }
    dphi /= 12.0 * step;
    return correction_from(centre.vectors, dphi);
}

} // namespace

TimeDependentOperator counter_diabatic(const TimeDependentOperator& h0, double step,
                                       bool include_reference) {
    if (!(step > 0.0) || 4.0 * step > h0.t_final()) {
        throw std::invalid_argument("counter_diabatic: step must be in (0, t_f/4]");
    }
    auto out = TimeDependentOperator::from_function(
        h0.dim(), h0.t_final(),
        [h0, step](double t) { return local_correction(h0, t, step); });
    if (include_reference) {
        out += h0;
    }
    return out;
}

ResolutionCheck richardson_check(const TimeDependentOperator& h0, double t, double step) {
    const Matrix coarse = local_correction(h0, t, step);
    const Matrix fine = local_correction(h0, t, 0.5 * step);
    ResolutionCheck r;
    r.deviation = hilbert::max_abs(coarse - fine);
    r.warning = r.deviation > 1e-6;
    return r;
}

} // namespace stap::tqd
