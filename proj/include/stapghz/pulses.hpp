// Gaussian fractional-STIRAP pulse pair, the mixing angle it
// defines, and the detuned pulse synthesized from the mixing-angle rate.

#pragma once

#include <numbers>
#include <vector>

namespace stap::pulses {

struct StirapPulseParams {
    double omega0{0.2};   // amplitude, units of λ
    double t0_ratio{0.14}; // center offset t0 / t_f
    double tc_ratio{0.19}; // width t_c / t_f
    double alpha{std::numbers::pi / 4.0};
    double t_final{35.0};
    double beta{0.0};

    double t0() const { return t0_ratio * t_final; }
    double tc() const { return tc_ratio * t_final; }

    // Throws std::invalid_argument unless Ω₀ > 0, t_c > 0, 0 < α ≤ π/2, t_f > 0.
    void validate() const;
};

// Gaussian pulses and their exact time derivatives. t must lie in [0, t_f].
double omega1(const StirapPulseParams& p, double t);
double omega3(const StirapPulseParams& p, double t);
double omega1_dot(const StirapPulseParams& p, double t);
double omega3_dot(const StirapPulseParams& p, double t);

// tan θ = Ω₁/Ω₃, θ̇ = (Ω̇₁Ω₃ − Ω̇₃Ω₁)/Ω².
class MixingAngle {
public:
    explicit MixingAngle(StirapPulseParams params);

    const StirapPulseParams& params() const noexcept { return params_; }
    double t_final() const noexcept { return params_.t_final; }

    double omega(double t) const;
    // Both throw std::domain_error where Ω = 0.
    double theta(double t) const;
    double theta_dot(double t) const;

private:
    StirapPulseParams params_;
};

// Validates the pulse and checks Ω > 0 on a dense grid of [0, t_f].
MixingAngle mixing_angle(const StirapPulseParams& params);

// Detuned pulse Ω̃(t) = √(3Δ|θ̇|) applied to both f↔e transitions, with the
// relative phase β′ = β − π/2 that makes the eliminated two-level coupling
// reproduce the counter-diabatic term. `gain` and `stretch` model an actual
// pulse that deviates from the design: Ω̃_actual(t) = gain · Ω̃(t / stretch).
struct ApfPulse {
    MixingAngle mixing;
    double detuning{0.0};
    double beta{0.0};
    double beta_prime{0.0};
    double peak_amplitude{0.0}; // Ω′₀ of the design pulse
    double gain{1.0};
    double stretch{1.0};

    double t_final() const { return mixing.t_final() * stretch; }
    double omega_tilde(double t) const;
    // Ω_x = −Ω̃²/(3Δ) of the design pulse.
    double omega_x(double t) const;
};

// Throws std::invalid_argument for Δ ≤ 0 or a θ̇ that changes sign.
ApfPulse synthesize_apf(const MixingAngle& mixing, double detuning, double beta);

// √(6Δ/t_f), the closed-form estimate of the synthesized peak amplitude.
double amplitude_estimate(double detuning, double t_final);

// Maximum of f on an evenly spaced grid of `points` samples over [0, t_f].
double grid_peak(double t_final, int points, const auto& f) {
    double peak = f(0.0);
    for (int i = 1; i < points; ++i) {
        const double t = t_final * static_cast<double>(i) / static_cast<double>(points - 1);
        const double v = f(t);
        if (v > peak) {
            peak = v;
        }
    }
    return peak;
}

// G = √3|θ̇|/(√2 Ω) evaluated at t = t_f / 2.
double adiabaticity_gauge(const MixingAngle& mixing);

struct PulseSample {
    double t_over_tf;
    double omega1;    // units of Ω₀
    double omega3;    // units of Ω₀
    double theta;
    double theta_dot; // units of λ
    double omega_tilde; // units of λ
};

std::vector<PulseSample> sample_pulses(const ApfPulse& apf, int points);

} // namespace stap::pulses
