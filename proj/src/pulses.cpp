#include "stapghz/pulses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stap::pulses {

namespace {

constexpr double kPi = std::numbers::pi;

void check_time(const StirapPulseParams& p, double t) {
    const double slack = 1e-9 * (1.0 + p.t_final);
    if (t < -slack || t > p.t_final + slack) {
        throw std::domain_error("pulse time " + std::to_string(t) + " outside [0, t_f]");
    }
}

// Early (Stokes-like) and late Gaussians and their derivatives.
double early(const StirapPulseParams& p, double t) {
    const double x = (t + p.t0() - 0.5 * p.t_final) / p.tc();
    return std::exp(-x * x);
}

double late(const StirapPulseParams& p, double t) {
    const double x = (t - p.t0() - 0.5 * p.t_final) / p.tc();
    return std::exp(-x * x);
}

double early_dot(const StirapPulseParams& p, double t) {
    const double u = t + p.t0() - 0.5 * p.t_final;
    return -2.0 * u / (p.tc() * p.tc()) * early(p, t);
}

double late_dot(const StirapPulseParams& p, double t) {
    const double u = t - p.t0() - 0.5 * p.t_final;
    return -2.0 * u / (p.tc() * p.tc()) * late(p, t);
}

} // namespace

void StirapPulseParams::validate() const {
    if (!(omega0 > 0.0)) {
        throw std::invalid_argument("pulse amplitude omega0 must be > 0");
    }
    if (!(t_final > 0.0)) {
        throw std::invalid_argument("t_final must be > 0");
    }
    if (!(tc_ratio > 0.0)) {
        throw std::invalid_argument("pulse width tc must be > 0");
    }
    if (!(alpha > 0.0 && alpha <= kPi / 2.0 + 1e-15)) {
        throw std::invalid_argument("alpha must satisfy 0 < alpha <= pi/2");
    }
}

double omega1(const StirapPulseParams& p, double t) {
    check_time(p, t);
    return std::sin(p.alpha) * p.omega0 * late(p, t);
}

double omega3(const StirapPulseParams& p, double t) {
    check_time(p, t);
    return p.omega0 * (early(p, t) + std::cos(p.alpha) * late(p, t));
}

double omega1_dot(const StirapPulseParams& p, double t) {
    check_time(p, t);
    return std::sin(p.alpha) * p.omega0 * late_dot(p, t);
}

double omega3_dot(const StirapPulseParams& p, double t) {
    check_time(p, t);
    return p.omega0 * (early_dot(p, t) + std::cos(p.alpha) * late_dot(p, t));
}

MixingAngle::MixingAngle(StirapPulseParams params) : params_(params) { params_.validate(); }

double MixingAngle::omega(double t) const {
    return std::hypot(omega1(params_, t), omega3(params_, t));
}

double MixingAngle::theta(double t) const {
    const double o1 = omega1(params_, t);
    const double o3 = omega3(params_, t);
    if (o1 == 0.0 && o3 == 0.0) {
        throw std::domain_error("mixing angle undefined where Omega = 0");
    }
    return std::atan2(o1, o3);
}

double MixingAngle::theta_dot(double t) const {
    const double o1 = omega1(params_, t);
    const double o3 = omega3(params_, t);
    const double omega_sq = o1 * o1 + o3 * o3;
    if (omega_sq == 0.0) {
        throw std::domain_error("mixing-angle rate undefined where Omega = 0");
    }
    return (omega1_dot(params_, t) * o3 - omega3_dot(params_, t) * o1) / omega_sq;
}

MixingAngle mixing_angle(const StirapPulseParams& params) {
    MixingAngle m(params);
    constexpr int kChecks = 2001;
    for (int i = 0; i < kChecks; ++i) {
        const double t = params.t_final * i / (kChecks - 1);
        if (!(m.omega(t) > 0.0)) {
            throw std::domain_error("Omega vanishes at t = " + std::to_string(t) +
                                    "; mixing angle is singular");
        }
    }
    return m;
}

double ApfPulse::omega_tilde(double t) const {
    const double design_t = t / stretch;
    return gain * std::sqrt(3.0 * detuning * std::abs(mixing.theta_dot(design_t)));
}

double ApfPulse::omega_x(double t) const {
    const double w = std::sqrt(3.0 * detuning * std::abs(mixing.theta_dot(t)));
    return -w * w / (3.0 * detuning);
}

ApfPulse synthesize_apf(const MixingAngle& mixing, double detuning, double beta) {
    if (!(detuning > 0.0)) {
        throw std::invalid_argument("APF synthesis requires detuning > 0");
    }
    constexpr int kGrid = 20001;
    double lo = 0.0;
    double hi = 0.0;
    double scale = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        const double td = mixing.theta_dot(mixing.t_final() * i / (kGrid - 1));
        lo = std::min(lo, td);
        hi = std::max(hi, td);
        scale = std::max(scale, std::abs(td));
    }
    // Sign flips below roundoff of the peak rate are not physical.
    const double noise = 1e-12 * scale;
    if (lo < -noise && hi > noise) {
        throw std::invalid_argument(
            "theta_dot changes sign; a constant phase beta' cannot realize the CDD coupling");
    }
    const double sign = (hi > noise) ? 1.0 : -1.0;

    ApfPulse apf{mixing, detuning, beta, 0.0, 0.0, 1.0, 1.0};
    // e^{iβ′}Ω_x = i e^{iβ}θ̇ with Ω_x = −|θ̇| gives e^{iβ′} = −i·sign(θ̇) e^{iβ}.
    apf.beta_prime = std::remainder(beta - sign * kPi / 2.0, 2.0 * kPi);
    apf.peak_amplitude =
        grid_peak(mixing.t_final(), kGrid, [&](double t) { return apf.omega_tilde(t); });
    return apf;
}

double amplitude_estimate(double detuning, double t_final) {
    return std::sqrt(6.0 * detuning / t_final);
}

double adiabaticity_gauge(const MixingAngle& mixing) {
    const double t_mid = 0.5 * mixing.t_final();
    const double omega = mixing.omega(t_mid);
    if (!(omega > 0.0)) {
        throw std::domain_error("adiabaticity gauge requires Omega(t_f/2) > 0");
    }
    return std::sqrt(3.0) * std::abs(mixing.theta_dot(t_mid)) / (std::sqrt(2.0) * omega);
}

std::vector<PulseSample> sample_pulses(const ApfPulse& apf, int points) {
    if (points < 2) {
        throw std::invalid_argument("need at least two samples");
    }
    const auto& p = apf.mixing.params();
    std::vector<PulseSample> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double s = static_cast<double>(i) / (points - 1);
        const double t = s * p.t_final;
        out.push_back(PulseSample{s, omega1(p, t) / p.omega0, omega3(p, t) / p.omega0,
                                  apf.mixing.theta(t), apf.mixing.theta_dot(t),
                                  apf.omega_tilde(t)});
    }
    return out;
}

} // namespace stap::pulses
