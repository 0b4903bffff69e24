#include "stapghz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stap::dynamics {

namespace {

struct Schedule {
    int steps;
    double dt;
    std::vector<int> sample_steps;
};

Schedule make_schedule(double t_final, const EvolutionOptions& options) {
    if (!(t_final > 0.0)) {
        throw std::invalid_argument("t_final must be > 0");
    }
    if (!(options.dt > 0.0)) {
        throw std::invalid_argument("dt must be > 0");
    }
    if (options.samples < 1) {
        throw std::invalid_argument("samples must be >= 1");
    }
    Schedule s;
    s.steps = std::max(1, static_cast<int>(std::ceil(t_final / options.dt - 1e-9)));
    s.dt = t_final / s.steps;
    const int samples = std::min(options.samples, s.steps);
    for (int k = 0; k <= samples; ++k) {
        s.sample_steps.push_back(static_cast<int>(
            std::llround(static_cast<double>(k) * s.steps / samples)));
    }
    return s;
}

void check_step_size(const TimeDependentOperator& h, double t_final, double dt) {
    constexpr int kProbes = 11;
    double worst = 0.0;
    for (int i = 0; i < kProbes; ++i) {
        const double t = t_final * i / (kProbes - 1);
        worst = std::max(worst, hilbert::max_abs(h.matrix(t)));
    }
    if (dt * worst >= 0.1) {
        std::ostringstream os;
        os << "step size too large: dt * max|H| = " << dt * worst << " >= 0.1";
        throw std::invalid_argument(os.str());
    }
}

KetEvolution evolve_ket(const TimeDependentOperator& h, const Ket& psi0, double t_final,
                        const EvolutionOptions& options) {
    if (psi0.dim() != h.dim()) {
        throw std::invalid_argument("initial ket dimension does not match the Hamiltonian");
    }
    const double norm0 = psi0.norm();
    if (std::abs(norm0 - 1.0) > 1e-9) {
        throw std::invalid_argument("initial ket is not normalized");
    }
    const Schedule sched = make_schedule(t_final, options);
    check_step_size(h, t_final, sched.dt);

    KetEvolution out;
    out.diagnostics.steps = sched.steps;
    out.diagnostics.dt = sched.dt;

    Matrix psi = psi0.amplitudes;
    Matrix k1, k2, k3, k4, tmp, hx;
    hx.resizeLike(psi);
    auto rhs = [&](double t, const Matrix& x, Matrix& dx) {
        h.apply_left(t, x, hx);
        dx = -kI * hx;
    };

    const double dt = sched.dt;
    std::size_t next_sample = 0;
    for (int step = 0; step <= sched.steps; ++step) {
        const double t = step * dt;
        if (next_sample < sched.sample_steps.size() && sched.sample_steps[next_sample] == step) {
            out.times.push_back(t);
            out.states.emplace_back(Vector(psi.col(0)));
            ++next_sample;
        }
        if (step == sched.steps) {
            break;
        }
        rhs(t, psi, k1);
        tmp = psi + 0.5 * dt * k1;
        rhs(t + 0.5 * dt, tmp, k2);
        tmp = psi + 0.5 * dt * k2;
        rhs(t + 0.5 * dt, tmp, k3);
        tmp = psi + dt * k3;
        rhs(std::min(t + dt, t_final), tmp, k4);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double drift = std::abs(psi.norm() - 1.0);
        out.diagnostics.max_norm_drift = std::max(out.diagnostics.max_norm_drift, drift);
        if (drift > options.max_norm_drift) {
            std::ostringstream os;
            os << "norm drift " << drift << " at t = " << t + dt << " exceeds "
               << options.max_norm_drift << "; reduce dt";
            throw NumericalToleranceError(os.str());
        }
    }
    return out;
}

struct LindbladRhs {
    const TimeDependentOperator& h;
    std::vector<SparseMatrix> jumps;
    std::vector<SparseMatrix> jumps_adj;
    SparseMatrix decay; // Σ L†L
    Matrix h_rho, rho_h, tmp;

    LindbladRhs(const TimeDependentOperator& ham, const model::LindbladSet& set) : h(ham) {
        const auto d = ham.dim();
        decay.resize(d, d);
        for (const auto& op : set.operators) {
            if (op.dim() != d) {
                throw std::invalid_argument("Lindblad operator dimension mismatch");
            }
            if (hilbert::max_abs(op.matrix()) == 0.0) {
                continue;
            }
            SparseMatrix l = op.matrix().sparseView(Complex(0.0), 0.0);
            SparseMatrix ld = l.adjoint();
            decay += SparseMatrix(ld * l);
            jumps.push_back(std::move(l));
            jumps_adj.push_back(std::move(ld));
        }
        decay.makeCompressed();
    }

    // ρ and every RK4 stage are Hermitian, so Hρ = (ρH)† and LρL† = (ρL†)†L†.
    void operator()(double t, const Matrix& rho, Matrix& drho) {
        h.apply_right(t, rho, rho_h);
        drho = kI * (rho_h - rho_h.adjoint());
        if (jumps.empty()) {
            return;
        }
        tmp.setZero(rho.rows(), rho.cols());
        hilbert::add_right_product(tmp, rho, decay, Complex(-0.5));
        drho += tmp;
        drho += tmp.adjoint();
        for (const auto& ld : jumps_adj) {
            tmp.setZero(rho.rows(), rho.cols());
            hilbert::add_right_product(tmp, rho, ld);
            h_rho = tmp.adjoint();
            hilbert::add_right_product(drho, h_rho, ld);
        }
    }
};

DensityEvolution evolve_density(const TimeDependentOperator& h, const model::LindbladSet& jumps,
                                const DensityMatrix& rho0, double t_final,
                                const EvolutionOptions& options) {
    if (rho0.dim() != h.dim()) {
        throw std::invalid_argument("initial density matrix dimension does not match H");
    }
    rho0.validate();
    const Schedule sched = make_schedule(t_final, options);
    check_step_size(h, t_final, sched.dt);

    DensityEvolution out;
    out.diagnostics.steps = sched.steps;
    out.diagnostics.dt = sched.dt;
    auto& diag = out.diagnostics;

    LindbladRhs rhs(h, jumps);
    Matrix rho = rho0.rho;
    Matrix k1, k2, k3, k4, tmp;
    const double dt = sched.dt;
    std::size_t next_sample = 0;
    for (int step = 0; step <= sched.steps; ++step) {
        const double t = step * dt;
        if (next_sample < sched.sample_steps.size() && sched.sample_steps[next_sample] == step) {
            DensityMatrix sample(rho);
            const double trace_drift = std::abs(sample.trace() - Complex(1.0));
            const double herm = sample.hermiticity_error();
            const double min_eig = sample.min_eigenvalue();
            diag.max_trace_drift = std::max(diag.max_trace_drift, trace_drift);
            diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, herm);
            diag.min_eigenvalue = std::min(diag.min_eigenvalue, min_eig);
            if (trace_drift > options.max_trace_drift || min_eig < options.min_eigenvalue ||
                herm > options.max_hermiticity_error) {
                std::ostringstream os;
                os << "density matrix left tolerance at t = " << t << " (trace drift "
                   << trace_drift << ", min eigenvalue " << min_eig << ", hermiticity "
                   << herm << "); reduce dt";
                throw NumericalToleranceError(os.str());
            }
            out.times.push_back(t);
            out.states.push_back(std::move(sample));
            ++next_sample;
        }
        if (step == sched.steps) {
            break;
        }
        rhs(t, rho, k1);
        tmp = rho + 0.5 * dt * k1;
        rhs(t + 0.5 * dt, tmp, k2);
        tmp = rho + 0.5 * dt * k2;
        rhs(t + 0.5 * dt, tmp, k3);
        tmp = rho + dt * k3;
        rhs(std::min(t + dt, t_final), tmp, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

} // namespace

KetEvolution schrodinger_evolve(const TimeDependentOperator& h, const Ket& psi0, double t_final,
                                const EvolutionOptions& options) {
    KetEvolution out = evolve_ket(h, psi0, t_final, options);
    if (options.check_convergence) {
        EvolutionOptions half = options;
        half.dt = out.diagnostics.dt / 2.0;
        half.samples = 1;
        const KetEvolution fine = evolve_ket(h, psi0, t_final, half);
        out.diagnostics.convergence_error =
            (fine.final_state().amplitudes - out.final_state().amplitudes).norm();
    }
    return out;
}

DensityEvolution lindblad_evolve(const TimeDependentOperator& h, const model::LindbladSet& jumps,
                                 const DensityMatrix& rho0, double t_final,
                                 const EvolutionOptions& options) {
    DensityEvolution out = evolve_density(h, jumps, rho0, t_final, options);
    if (options.check_convergence) {
        EvolutionOptions half = options;
        half.dt = out.diagnostics.dt / 2.0;
        half.samples = 1;
        const DensityEvolution fine = evolve_density(h, jumps, rho0, t_final, half);
        out.diagnostics.convergence_error =
            hilbert::max_abs(fine.final_state().rho - out.final_state().rho);
    }
    return out;
}

double population(const DensityMatrix& rho, const Ket& target) {
    if (rho.dim() != target.dim()) {
        throw std::invalid_argument("population: dimension mismatch");
    }
    return std::abs(target.amplitudes.dot(rho.rho * target.amplitudes));
}

double population(const Ket& psi, const Ket& target) {
    if (psi.dim() != target.dim()) {
        throw std::invalid_argument("population: dimension mismatch");
    }
    return std::norm(target.amplitudes.dot(psi.amplitudes));
}

double fidelity(const DensityMatrix& rho, const Ket& ghz) { return population(rho, ghz); }

double fidelity(const Ket& psi, const Ket& ghz) { return population(psi, ghz); }

double fidelity(const hilbert::StateSpace& space, const DensityMatrix& rho, double beta) {
    return population(rho, model::ghz_state(space, beta));
}

} // namespace stap::dynamics
