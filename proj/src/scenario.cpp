#include "stapghz/scenario.hpp"

#include "stapghz/reduction.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <thread>

namespace stap::app {

namespace {

const double kSqrt3 = std::sqrt(3.0);

class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
        }
    }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> known(keys.begin(), keys.end());
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!known.count(it.key())) {
                throw ConfigError(path_ + "/" + it.key(), "unknown field");
            }
        }
    }

    bool has(const char* key) const { return node_.contains(key); }
    std::string path(const char* key) const { return path_ + "/" + key; }
    const json& at(const char* key) const { return node_.at(key); }

    double number(const char* key, double fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = node_.at(key);
        if (!v.is_number()) {
            throw ConfigError(path(key), "expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ConfigError(path(key), "must be finite");
        }
        return d;
    }

    int integer(const char* key, int fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = node_.at(key);
        if (!v.is_number_integer()) {
            throw ConfigError(path(key), "expected an integer");
        }
        return v.get<int>();
    }

    bool boolean(const char* key, bool fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = node_.at(key);
        if (!v.is_boolean()) {
            throw ConfigError(path(key), "expected true or false");
        }
        return v.get<bool>();
    }

    std::string string(const char* key, const std::string& fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = node_.at(key);
        if (!v.is_string()) {
            throw ConfigError(path(key), "expected a string");
        }
        return v.get<std::string>();
    }

private:
    const json& node_;
    std::string path_;
};

void require(bool ok, const std::string& path, const std::string& message) {
    if (!ok) {
        throw ConfigError(path, message);
    }
}

model::NoiseParams parse_noise(const Reader& r) {
    r.allow({"kappa", "gamma", "kappa_left", "kappa_right", "gamma_1", "gamma_2", "gamma_3",
             "gamma_4", "gamma_5", "gamma_6"});
    auto n = model::NoiseParams::uniform(r.number("kappa", 0.0), r.number("gamma", 0.0));
    n.kappa_left = r.number("kappa_left", n.kappa_left);
    n.kappa_right = r.number("kappa_right", n.kappa_right);
    static const std::array<const char*, 6> keys{"gamma_1", "gamma_2", "gamma_3",
                                                 "gamma_4", "gamma_5", "gamma_6"};
    for (std::size_t k = 0; k < keys.size(); ++k) {
        n.gamma[k] = r.number(keys[k], n.gamma[k]);
        require(n.gamma[k] >= 0.0, r.path(keys[k]), "rate must be >= 0");
    }
    require(n.kappa_left >= 0.0, r.path("kappa_left"), "rate must be >= 0");
    require(n.kappa_right >= 0.0, r.path("kappa_right"), "rate must be >= 0");
    return n;
}

pulses::StirapPulseParams actual_pulse(const Scenario& s) {
    pulses::StirapPulseParams p = s.pulse;
    p.omega0 *= 1.0 + s.deviations.amplitude;
    p.t_final *= 1.0 + s.deviations.T;
    return p;
}

model::ModelParams actual_model(const Scenario& s) {
    model::ModelParams m = s.model;
    m.lambda_left *= 1.0 + s.deviations.lambda;
    m.lambda_right *= 1.0 + s.deviations.lambda;
    m.detuning *= 1.0 + s.deviations.detuning;
    return m;
}

pulses::ApfPulse actual_apf(const Scenario& s) {
    auto apf = pulses::synthesize_apf(pulses::mixing_angle(s.pulse), s.model.detuning,
                                      s.pulse.beta);
    apf.gain = 1.0 + s.deviations.amplitude;
    apf.stretch = 1.0 + s.deviations.T;
    return apf;
}

struct Prepared {
    hilbert::TimeDependentOperator hamiltonian;
    hilbert::Ket initial;
    hilbert::Ket ghz;
    std::vector<hilbert::Ket> tracked;
    std::vector<std::string> labels;
    std::optional<hilbert::StateSpace> space;
    double zeno_ratio{0.0};
    double detuning_ratio{0.0};
};

Prepared prepare(const Scenario& s) {
    const double beta = s.pulse.beta;
    if (is_full_space(s.variant)) {
        hilbert::StateSpace space(s.n_max);
        const auto basis = model::single_excitation_basis(space);
        const auto params = actual_model(s);
        auto build = [&]() -> std::pair<hilbert::TimeDependentOperator, std::pair<double, double>> {
            if (s.variant == HamiltonianVariant::original) {
                const auto p = actual_pulse(s);
                const auto drive = model::DrivePulses::from(p);
                const double lam = std::min(params.lambda_left, params.lambda_right);
                const double peak = pulses::grid_peak(p.t_final, 2001, [&](double t) {
                    return std::max(drive.omega1(t), drive.omega3(t));
                });
                return {model::build_H_I(space, drive, params), {peak / (kSqrt3 * lam), 0.0}};
            }
            const auto apf = actual_apf(s);
            const double lam = std::min(params.lambda_left, params.lambda_right);
            const double peak = pulses::grid_peak(apf.t_final(), 2001,
                                                  [&](double t) { return apf.omega_tilde(t); });
            return {model::build_H_I_prime(space, apf, params),
                    {peak / (kSqrt3 * lam), peak / (kSqrt3 * params.detuning)}};
        };
        auto [h, ratios] = build();
        Prepared p{std::move(h), basis[0], model::ghz_state(space, beta), {}, {}, space,
                   ratios.first, ratios.second};
        for (std::size_t k = 0; k < basis.size(); ++k) {
            p.tracked.push_back(basis[k]);
            p.labels.push_back("psi" + std::to_string(k + 1));
        }
        return p;
    }

    auto unit = [](Eigen::Index k) {
        Vector v = Vector::Zero(3);
        v(k) = 1.0;
        return hilbert::Ket(std::move(v));
    };
    Vector g = Vector::Zero(3);
    g(reduction::kPsi1) = 1.0 / std::sqrt(2.0);
    g(reduction::kPsi7) = -std::polar(1.0, beta) / std::sqrt(2.0);

    std::optional<reduction::EffectiveModel> m;
    double zeno = 0.0;
    double detuned = 0.0;
    switch (s.variant) {
    case HamiltonianVariant::effective_resonant:
        m.emplace(reduction::h_eff_resonant(model::DrivePulses::from(actual_pulse(s))));
        zeno = m->validity_ratio;
        break;
    case HamiltonianVariant::effective_final:
        m.emplace(reduction::h_eff_final(actual_apf(s)));
        detuned = m->validity_ratio;
        break;
    default: {
        auto p = s.pulse;
        p.t_final *= 1.0 + s.deviations.T;
        m.emplace(reduction::cdd_hamiltonian(pulses::mixing_angle(p), beta));
        break;
    }
    }
    Prepared p{m->hamiltonian, unit(reduction::kPsi1), hilbert::Ket(g), {}, {}, std::nullopt,
               zeno, detuned};
    p.tracked = {unit(reduction::kPsi1), unit(reduction::kPhi0), unit(reduction::kPsi7)};
    p.labels = {"psi1", "phi0", "psi7"};
    return p;
}

} // namespace

std::string to_string(HamiltonianVariant v) {
    switch (v) {
    case HamiltonianVariant::original:
        return "original";
    case HamiltonianVariant::apf:
        return "apf";
    case HamiltonianVariant::effective_resonant:
        return "effective-resonant";
    case HamiltonianVariant::effective_final:
        return "effective-final";
    case HamiltonianVariant::cdd:
        return "cdd";
    }
    return "?";
}

HamiltonianVariant parse_variant(const std::string& name) {
    for (auto v : {HamiltonianVariant::original, HamiltonianVariant::apf,
                   HamiltonianVariant::effective_resonant, HamiltonianVariant::effective_final,
                   HamiltonianVariant::cdd}) {
        if (to_string(v) == name) {
            return v;
        }
    }
    throw ConfigError("/variant", "unknown variant '" + name +
                                      "' (original, apf, effective-resonant, effective-final, cdd)");
}

bool is_full_space(HamiltonianVariant v) {
    return v == HamiltonianVariant::original || v == HamiltonianVariant::apf;
}

Scenario parse_scenario(const json& config) {
    Reader root(config, "");
    root.allow({"variant", "model", "noise", "pulse", "deviations", "integrator", "output",
                "lambda_hz"});
    Scenario s;
    s.variant = parse_variant(root.string("variant", "apf"));

    if (root.has("model")) {
        Reader r(root.at("model"), "/model");
        r.allow({"lambda_left", "lambda_right", "lambda", "detuning", "n_max"});
        const double lam = r.number("lambda", 1.0);
        s.model.lambda_left = r.number("lambda_left", lam);
        s.model.lambda_right = r.number("lambda_right", lam);
        s.model.detuning = r.number("detuning", s.model.detuning);
        s.n_max = r.integer("n_max", 1);
        require(s.model.lambda_left > 0.0, r.path("lambda_left"), "must be > 0");
        require(s.model.lambda_right > 0.0, r.path("lambda_right"), "must be > 0");
        require(s.n_max >= 1, r.path("n_max"), "must be >= 1");
    }
    if (s.variant == HamiltonianVariant::apf || s.variant == HamiltonianVariant::effective_final) {
        require(s.model.detuning > 0.0, "/model/detuning",
                "variant " + to_string(s.variant) + " requires detuning > 0");
    }

    if (root.has("pulse")) {
        Reader r(root.at("pulse"), "/pulse");
        r.allow({"omega0", "t0_ratio", "tc_ratio", "alpha", "t_final", "beta"});
        auto& p = s.pulse;
        p.omega0 = r.number("omega0", p.omega0);
        p.t0_ratio = r.number("t0_ratio", p.t0_ratio);
        p.tc_ratio = r.number("tc_ratio", p.tc_ratio);
        p.alpha = r.number("alpha", p.alpha);
        p.t_final = r.number("t_final", p.t_final);
        p.beta = r.number("beta", p.beta);
        require(p.omega0 > 0.0, r.path("omega0"), "must be > 0");
        require(p.tc_ratio > 0.0, r.path("tc_ratio"), "must be > 0");
        require(p.t_final > 0.0, r.path("t_final"), "must be > 0");
        require(p.alpha > 0.0 && p.alpha <= std::numbers::pi / 2.0 + 1e-15, r.path("alpha"),
                "must satisfy 0 < alpha <= pi/2");
    }

    if (root.has("noise") && !root.at("noise").is_null()) {
        Reader r(root.at("noise"), "/noise");
        if (!root.at("noise").empty()) {
            s.noise = parse_noise(r);
        }
    }
    if (!s.unitary()) {
        require(is_full_space(s.variant), "/noise",
                "noise requires a full-space variant (original or apf)");
    }

    if (root.has("deviations")) {
        Reader r(root.at("deviations"), "/deviations");
        r.allow({"T", "amplitude", "lambda", "detuning"});
        s.deviations.T = r.number("T", 0.0);
        s.deviations.amplitude = r.number("amplitude", 0.0);
        s.deviations.lambda = r.number("lambda", 0.0);
        s.deviations.detuning = r.number("detuning", 0.0);
        require(s.deviations.T > -1.0, r.path("T"), "must be > -1");
        require(s.deviations.amplitude > -1.0, r.path("amplitude"), "must be > -1");
        require(s.deviations.lambda > -1.0, r.path("lambda"), "must be > -1");
        require(s.deviations.detuning > -1.0, r.path("detuning"), "must be > -1");
    }

    if (root.has("integrator")) {
        Reader r(root.at("integrator"), "/integrator");
        r.allow({"dt", "samples", "check_convergence"});
        s.integrator.dt = r.number("dt", s.integrator.dt);
        s.integrator.samples = r.integer("samples", s.integrator.samples);
        s.integrator.check_convergence = r.boolean("check_convergence", false);
        require(s.integrator.dt > 0.0, r.path("dt"), "must be > 0");
        require(s.integrator.samples >= 1, r.path("samples"), "must be >= 1");
    }

    if (root.has("output")) {
        Reader r(root.at("output"), "/output");
        r.allow({"timeseries", "summary"});
        s.timeseries_path = r.string("timeseries", "");
        s.summary_path = r.string("summary", "");
    }
    if (root.has("lambda_hz")) {
        s.lambda_hz = root.number("lambda_hz", 0.0);
    }
    return s;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, "cannot open file");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, e.what());
    }
}

Scenario load_scenario(const std::string& path) { return parse_scenario(load_json(path)); }

ScenarioResult run_scenario(const Scenario& s) {
    const auto start = std::chrono::steady_clock::now();
    Prepared p = prepare(s);
    const double t_final = p.hamiltonian.t_final();

    ScenarioResult r;
    r.variant = s.variant;
    r.unitary = s.unitary();
    r.state_labels = p.labels;
    r.zeno_ratio = p.zeno_ratio;
    r.detuning_ratio = p.detuning_ratio;

    if (r.unitary) {
        const auto ev = dynamics::schrodinger_evolve(p.hamiltonian, p.initial, t_final,
                                                     s.integrator);
        r.times = ev.times;
        for (const auto& psi : ev.states) {
            std::vector<double> row;
            for (const auto& k : p.tracked) {
                row.push_back(dynamics::population(psi, k));
            }
            r.populations.push_back(std::move(row));
            r.norm_or_trace.push_back(psi.norm());
        }
        r.fidelity = dynamics::fidelity(ev.final_state(), p.ghz);
        r.diagnostics = ev.diagnostics;
    } else {
        const auto jumps = model::build_lindblad_set(*p.space, *s.noise);
        const auto ev = dynamics::lindblad_evolve(
            p.hamiltonian, jumps, hilbert::DensityMatrix::pure(p.initial), t_final, s.integrator);
        r.times = ev.times;
        for (const auto& rho : ev.states) {
            std::vector<double> row;
            for (const auto& k : p.tracked) {
                row.push_back(dynamics::population(rho, k));
            }
            r.populations.push_back(std::move(row));
            r.norm_or_trace.push_back(rho.trace().real());
        }
        r.fidelity = dynamics::fidelity(ev.final_state(), p.ghz);
        r.diagnostics = ev.diagnostics;
    }
    r.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_timeseries_csv(std::ostream& os, const ScenarioResult& r) {
    os << "# stap-ghz timeseries v1; variant=" << to_string(r.variant)
       << "; populations are |<k|rho|k>|; units: t in 1/lambda\n";
    os << "t";
    for (const auto& l : r.state_labels) {
        os << ",P_" << l;
    }
    os << (r.unitary ? ",norm" : ",trace") << '\n';
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        os << format_number(r.times[i]);
        for (double p : r.populations[i]) {
            os << ',' << format_number(p);
        }
        os << ',' << format_number(r.norm_or_trace[i]) << '\n';
    }
}

json summary_json(const Scenario& s, const ScenarioResult& r) {
    json out;
    out["schema"] = "stap-ghz/summary/v1";
    out["variant"] = to_string(r.variant);
    out["mode"] = r.unitary ? "unitary" : "lindblad";
    out["unitary"] = r.unitary;
    out["final_fidelity"] = r.fidelity;
    json pops = json::object();
    for (std::size_t k = 0; k < r.state_labels.size(); ++k) {
        pops[r.state_labels[k]] = r.populations.back()[k];
    }
    out["final_populations"] = pops;
    out["validity"] = {{"zeno_ratio", r.zeno_ratio}, {"detuning_ratio", r.detuning_ratio}};
    json diag = {{"steps", r.diagnostics.steps},
                 {"dt", r.diagnostics.dt},
                 {"max_norm_drift", r.diagnostics.max_norm_drift},
                 {"max_trace_drift", r.diagnostics.max_trace_drift},
                 {"max_hermiticity_error", r.diagnostics.max_hermiticity_error}};
    if (!r.unitary) {
        diag["min_eigenvalue"] = r.diagnostics.min_eigenvalue;
    }
    if (r.diagnostics.convergence_error >= 0.0) {
        diag["convergence_error"] = r.diagnostics.convergence_error;
    }
    out["diagnostics"] = diag;
    out["runtime_seconds"] = r.runtime_seconds;
    if (s.lambda_hz) {
        out["lambda_hz"] = *s.lambda_hz;
    }
    return out;
}

std::size_t SweepSpec::points() const {
    std::size_t n = 1;
    for (const auto& a : axes) {
        n *= a.values.size();
    }
    return n;
}

SweepSpec parse_sweep(const json& config) {
    Reader root(config, "");
    root.allow({"scenario", "scenario_file", "axes", "workers", "max_points"});
    SweepSpec spec;
    if (root.has("scenario") == root.has("scenario_file")) {
        throw ConfigError("/scenario", "give exactly one of scenario or scenario_file");
    }
    spec.scenario_template = root.has("scenario")
                                 ? root.at("scenario")
                                 : load_json(root.string("scenario_file", ""));
    // Fail early on a broken template.
    parse_scenario(spec.scenario_template);

    spec.workers = root.integer("workers", 1);
    require(spec.workers >= 1, "/workers", "must be >= 1");
    spec.max_points = static_cast<std::size_t>(root.integer("max_points", 2500));

    require(root.has("axes") && root.at("axes").is_array(), "/axes", "expected an array");
    const json& axes = root.at("axes");
    require(!axes.empty() && axes.size() <= 2, "/axes", "one or two axes required");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string base = "/axes/" + std::to_string(i);
        Reader r(axes[i], base);
        r.allow({"path", "start", "stop", "count", "values"});
        SweepAxis axis;
        axis.path = r.string("path", "");
        require(!axis.path.empty() && axis.path.front() == '/', r.path("path"),
                "expected a JSON pointer such as /model/detuning");
        if (r.has("values")) {
            require(r.at("values").is_array() && !r.at("values").empty(), r.path("values"),
                    "expected a non-empty array");
            for (const auto& v : r.at("values")) {
                require(v.is_number() && std::isfinite(v.get<double>()), r.path("values"),
                        "values must be finite numbers");
                axis.values.push_back(v.get<double>());
            }
            require(std::is_sorted(axis.values.begin(), axis.values.end()), r.path("values"),
                    "values must be in increasing order");
        } else {
            const double start = r.number("start", 0.0);
            const double stop = r.number("stop", start);
            const int count = r.integer("count", 1);
            require(count >= 1, r.path("count"), "must be >= 1");
            require(start <= stop, r.path("stop"), "must be >= start");
            for (int k = 0; k < count; ++k) {
                axis.values.push_back(count == 1 ? start
                                                 : start + (stop - start) * k / (count - 1));
            }
        }
        spec.axes.push_back(std::move(axis));
    }
    require(spec.points() <= spec.max_points, "/max_points",
            "grid of " + std::to_string(spec.points()) + " points exceeds the budget");
    return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) { return run_sweep(spec, spec.workers); }

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers) {
    const std::size_t n = spec.points();
    std::vector<SweepRow> rows(n);

    auto compute = [&](std::size_t index) {
        SweepRow row;
        std::size_t rem = index;
        std::vector<std::size_t> pos(spec.axes.size());
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            pos[a] = rem % spec.axes[a].values.size();
            rem /= spec.axes[a].values.size();
        }
        json config = spec.scenario_template;
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            const double v = spec.axes[a].values[pos[a]];
            row.values.push_back(v);
            config[json::json_pointer(spec.axes[a].path)] = v;
        }
        try {
            Scenario s = parse_scenario(config);
            s.integrator.samples = std::min(s.integrator.samples, 10);
            const ScenarioResult r = run_scenario(s);
            row.ok = true;
            row.fidelity = r.fidelity;
            row.max_drift = r.unitary ? r.diagnostics.max_norm_drift : r.diagnostics.max_trace_drift;
            row.zeno_ratio = r.zeno_ratio;
            row.detuning_ratio = r.detuning_ratio;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        rows[index] = std::move(row);
    };

    const int pool = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (pool == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            compute(i);
        }
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    for (int w = 0; w < pool; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                compute(i);
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    os << "# stap-ghz sweep v1; fidelity = |<GHZ|rho(t_f)|GHZ>|\n";
    for (const auto& a : spec.axes) {
        os << a.path << ',';
    }
    os << "fidelity,status,max_drift,zeno_ratio,detuning_ratio,error\n";
    for (const auto& r : rows) {
        for (double v : r.values) {
            os << format_number(v) << ',';
        }
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        if (r.ok) {
            os << format_number(r.fidelity) << ",ok," << format_number(r.max_drift) << ','
               << format_number(r.zeno_ratio) << ',' << format_number(r.detuning_ratio) << ",\n";
        } else {
            os << ",failed,,,," << err << '\n';
        }
    }
}

} // namespace stap::app
