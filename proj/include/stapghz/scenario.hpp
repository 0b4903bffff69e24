// JSON-configured runs and parameter sweeps.
//
// All physical quantities are dimensionless: rates and amplitudes in units
// of λ, times in units of 1/λ.

#pragma once

#include "stapghz/dynamics.hpp"
#include "stapghz/model.hpp"
#include "stapghz/pulses.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stap::app {

using nlohmann::json;

// Invalid configuration; `path` is the JSON pointer of the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

enum class HamiltonianVariant { original, apf, effective_resonant, effective_final, cdd };

std::string to_string(HamiltonianVariant v);
HamiltonianVariant parse_variant(const std::string& name);
bool is_full_space(HamiltonianVariant v);

// Relative deviations δx/x of the actual from the designed value.
struct Deviations {
    double T{0.0};         // pulse duration (pulses stretched, amplitude kept)
    double amplitude{0.0}; // laser amplitude (Ω₀ or Ω′₀)
    double lambda{0.0};    // atom-cavity coupling
    double detuning{0.0};  // detuning seen by the atoms; the pulse keeps its design Δ
};

struct Scenario {
    HamiltonianVariant variant{HamiltonianVariant::apf};
    int n_max{1};
    model::ModelParams model{1.0, 1.0, 2.2};
    std::optional<model::NoiseParams> noise;
    pulses::StirapPulseParams pulse;
    Deviations deviations;
    dynamics::EvolutionOptions integrator{};
    std::optional<double> lambda_hz;
    std::string timeseries_path;
    std::string summary_path;

    bool unitary() const { return !noise || noise->is_zero(); }
};

Scenario parse_scenario(const json& config);
Scenario load_scenario(const std::string& path);
json load_json(const std::string& path);

struct ScenarioResult {
    HamiltonianVariant variant{};
    bool unitary{true};
    std::vector<std::string> state_labels;
    std::vector<double> times;
    std::vector<std::vector<double>> populations; // [sample][state]
    std::vector<double> norm_or_trace;
    double fidelity{0.0};
    double zeno_ratio{0.0};
    double detuning_ratio{0.0};
    double runtime_seconds{0.0};
    dynamics::Diagnostics diagnostics;
};

// Throws NumericalToleranceError on an integrator tolerance breach.
ScenarioResult run_scenario(const Scenario& scenario);

std::string format_number(double v);
void write_timeseries_csv(std::ostream& os, const ScenarioResult& result);
json summary_json(const Scenario& scenario, const ScenarioResult& result);

struct SweepAxis {
    std::string path; // JSON pointer into the scenario template
    std::vector<double> values;
};

struct SweepSpec {
    json scenario_template;
    std::vector<SweepAxis> axes; // one or two
    int workers{1};
    std::size_t max_points{2500};

    std::size_t points() const;
};

SweepSpec parse_sweep(const json& config);

struct SweepRow {
    std::vector<double> values;
    bool ok{false};
    double fidelity{0.0};
    double max_drift{0.0};
    double zeno_ratio{0.0};
    double detuning_ratio{0.0};
    std::string error;
};

// Rows in row-major axis order (first axis outermost). Per-point failures
// are recorded in the row and do not stop the sweep.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers);

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows);

} // namespace stap::app
