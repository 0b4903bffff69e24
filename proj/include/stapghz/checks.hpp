// Diagnostic tables and the property suite behind the
// pulses/gauge/check-* subcommands.

#pragma once

#include "stapghz/pulses.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stap::checks {

struct GaugeRow {
    double t_final;
    double gauge;
};

std::vector<GaugeRow> gauge_table(const pulses::StirapPulseParams& base,
                                  const std::vector<double>& t_finals);

struct ZenoRow {
    double omega0;
    double t_final;
    double validity_ratio; // max Ω/(√3λ)
    double discrepancy;
};

// Pulse area kept fixed: t_f = area / Ω₀.
std::vector<ZenoRow> zeno_table(const pulses::StirapPulseParams& base,
                                const std::vector<double>& omega0s, double area = 7.0);

bool decreasing_with_omega0(const std::vector<ZenoRow>& rows);

struct EquivalenceRow {
    double t;
    double deviation; // max |H̃_eff − H_cdd| entrywise
};

std::vector<EquivalenceRow> equivalence_table(const pulses::StirapPulseParams& pulse,
                                              double detuning, int points = 201);

// Max |H₁(engine) − H_cdd| on a grid of spacing 1e-4·t_f.
double cdd_engine_deviation(const pulses::StirapPulseParams& pulse);

// Error ratio e(dt)/e(dt/2) on the constant-coupling Rabi oracle.
double rk4_convergence_factor(double coupling = 1.0, double t_final = 10.0, double dt = 0.08);

struct PropertyResult {
    std::string name;
    double value;
    double threshold;
    bool passed;
};

struct TqdSuiteOptions {
    std::uint64_t seed{20240611};
    int instances{20};
    double dt{0.002};
};

// Transitionless leakage on random smooth 3-level generators, engine vs
// analytic counter-diabatic term, gauge invariance, APF equivalence and the
// integrator order.
std::vector<PropertyResult> tqd_property_suite(const TqdSuiteOptions& options = {});

} // namespace stap::checks
