#include "stapghz/checks.hpp"
#include "stapghz/scenario.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace stap;

constexpr int kConfigError = 2;
constexpr int kToleranceError = 3;

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") {
        return std::cout;
    }
    file.open(path);
    if (!file) {
        throw app::ConfigError(path, "cannot open output file");
    }
    return file;
}

int cmd_run(const std::string& config, std::string timeseries, std::string summary) {
    const auto scenario = app::load_scenario(config);
    const auto result = app::run_scenario(scenario);
    if (timeseries.empty()) {
        timeseries = scenario.timeseries_path;
    }
    if (summary.empty()) {
        summary = scenario.summary_path;
    }
    if (!timeseries.empty()) {
        std::ofstream file;
        app::write_timeseries_csv(open_output(timeseries, file), result);
    }
    std::ofstream file;
    open_output(summary, file) << app::summary_json(scenario, result).dump(2) << '\n';
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& out, int workers) {
    const auto spec = app::parse_sweep(app::load_json(config));
    const auto rows = app::run_sweep(spec, workers > 0 ? workers : spec.workers);
    std::ofstream file;
    app::write_sweep_csv(open_output(out, file), spec, rows);
    std::size_t failed = 0;
    for (const auto& r : rows) {
        failed += r.ok ? 0 : 1;
    }
    if (failed > 0) {
        std::cerr << failed << " of " << rows.size() << " sweep points failed\n";
    }
    return 0;
}

int cmd_pulses(const pulses::StirapPulseParams& p, double detuning, int points) {
    const auto apf = pulses::synthesize_apf(pulses::mixing_angle(p), detuning, p.beta);
    std::cout << "# stap-ghz pulses v1; omega1,omega3 in units of omega0; theta_dot,omega_tilde "
                 "in units of lambda\n";
    std::cout << "t_over_tf,omega1,omega3,theta,theta_dot,omega_tilde\n";
    for (const auto& s : pulses::sample_pulses(apf, points)) {
        std::cout << app::format_number(s.t_over_tf) << ',' << app::format_number(s.omega1) << ','
                  << app::format_number(s.omega3) << ',' << app::format_number(s.theta) << ','
                  << app::format_number(s.theta_dot) << ',' << app::format_number(s.omega_tilde)
                  << '\n';
    }
    return 0;
}

int cmd_gauge(const pulses::StirapPulseParams& p, double from, double to, int count) {
    if (count < 1 || !(from > 0.0) || from > to) {
        throw app::ConfigError("--tf-min/--tf-max/--count", "need 0 < tf-min <= tf-max, count >= 1");
    }
    std::vector<double> tfs;
    for (int i = 0; i < count; ++i) {
        tfs.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
    }
    std::cout << "# stap-ghz gauge v1; omega0=" << app::format_number(p.omega0) << '\n';
    std::cout << "t_final,G\n";
    for (const auto& r : checks::gauge_table(p, tfs)) {
        std::cout << app::format_number(r.t_final) << ',' << app::format_number(r.gauge) << '\n';
    }
    return 0;
}

int cmd_check_zeno(const pulses::StirapPulseParams& p, const std::vector<double>& omega0s,
                   double area) {
    const auto rows = checks::zeno_table(p, omega0s, area);
    std::cout << "# stap-ghz check-zeno v1; t_final = area/omega0\n";
    std::cout << "omega0,t_final,zeno_ratio,discrepancy\n";
    for (const auto& r : rows) {
        std::cout << app::format_number(r.omega0) << ',' << app::format_number(r.t_final) << ','
                  << app::format_number(r.validity_ratio) << ','
                  << app::format_number(r.discrepancy) << '\n';
    }
    const bool ok = checks::decreasing_with_omega0(rows);
    std::cerr << (ok ? "PASS" : "FAIL") << " discrepancy decreases with omega0\n";
    return ok ? 0 : kToleranceError;
}

int cmd_check_tqd(std::uint64_t seed, int instances) {
    checks::TqdSuiteOptions opts;
    opts.seed = seed;
    opts.instances = instances;
    bool ok = true;
    for (const auto& r : checks::tqd_property_suite(opts)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": "
                  << app::format_number(r.value) << " (limit " << app::format_number(r.threshold)
                  << ")\n";
        ok = ok && r.passed;
    }
    return ok ? 0 : kToleranceError;
}

int cmd_check_equivalence(const pulses::StirapPulseParams& p, double detuning, int points) {
    double worst = 0.0;
    std::cout << "# stap-ghz check-equivalence v1\n";
    std::cout << "t,max_abs_deviation\n";
    for (const auto& r : checks::equivalence_table(p, detuning, points)) {
        std::cout << app::format_number(r.t) << ',' << app::format_number(r.deviation) << '\n';
        worst = std::max(worst, r.deviation);
    }
    const bool ok = worst < 1e-10;
    std::cerr << (ok ? "PASS" : "FAIL") << " max deviation " << app::format_number(worst) << '\n';
    return ok ? 0 : kToleranceError;
}

void pulse_flags(CLI::App* cmd, pulses::StirapPulseParams& p) {
    cmd->add_option("--omega0", p.omega0, "pulse amplitude (units of lambda)");
    cmd->add_option("--tf", p.t_final, "pulse duration (units of 1/lambda)");
    cmd->add_option("--alpha", p.alpha, "final mixing angle");
    cmd->add_option("--beta", p.beta, "relative laser phase");
    cmd->add_option("--t0-ratio", p.t0_ratio);
    cmd->add_option("--tc-ratio", p.tc_ratio);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Shortcut-to-adiabaticity GHZ generation in a bimodal cavity"};
    cli.require_subcommand(1);

    std::string config;
    std::string timeseries;
    std::string summary;
    auto* run = cli.add_subcommand("run", "run a scenario");
    run->add_option("config", config, "scenario JSON")->required();
    run->add_option("--timeseries", timeseries, "time-series CSV path");
    run->add_option("--summary", summary, "summary JSON path (default stdout)");

    std::string sweep_out;
    int workers = 0;
    auto* sweep = cli.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("config", config, "sweep JSON")->required();
    sweep->add_option("-o,--output", sweep_out, "grid CSV path (default stdout)");
    sweep->add_option("-j,--workers", workers, "worker threads");

    pulses::StirapPulseParams pulse;
    double detuning = 2.2;
    int points = 201;
    auto* pulses_cmd = cli.add_subcommand("pulses", "sample the pulse pair and the APF pulse");
    pulse_flags(pulses_cmd, pulse);
    pulses_cmd->add_option("--detuning", detuning);
    pulses_cmd->add_option("--points", points);

    double tf_min = 20.0;
    double tf_max = 200.0;
    int count = 19;
    auto* gauge = cli.add_subcommand("gauge", "adiabaticity gauge G versus t_f");
    pulse_flags(gauge, pulse);
    gauge->add_option("--tf-min", tf_min);
    gauge->add_option("--tf-max", tf_max);
    gauge->add_option("--count", count);

    std::vector<double> omega0s{0.2, 0.1, 0.05};
    double area = 7.0;
    auto* zeno = cli.add_subcommand("check-zeno", "full versus Zeno-reduced dynamics");
    zeno->add_option("--omega0", omega0s)->delimiter(',');
    zeno->add_option("--area", area, "omega0 * t_f held fixed");

    std::uint64_t seed = 20240611;
    int instances = 20;
    auto* tqd_cmd = cli.add_subcommand("check-tqd", "transitionless-driving property suite");
    tqd_cmd->add_option("--seed", seed);
    tqd_cmd->add_option("--instances", instances);

    auto* equiv = cli.add_subcommand("check-equivalence",
                                     "detuned effective Hamiltonian versus counter-diabatic term");
    pulse_flags(equiv, pulse);
    equiv->add_option("--detuning", detuning);
    equiv->add_option("--points", points);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*run) {
            return cmd_run(config, timeseries, summary);
        }
        if (*sweep) {
            return cmd_sweep(config, sweep_out, workers);
        }
        if (*pulses_cmd) {
            return cmd_pulses(pulse, detuning, points);
        }
        if (*gauge) {
            return cmd_gauge(pulse, tf_min, tf_max, count);
        }
        if (*zeno) {
            return cmd_check_zeno(pulse, omega0s, area);
        }
        if (*tqd_cmd) {
            return cmd_check_tqd(seed, instances);
        }
        if (*equiv) {
            return cmd_check_equivalence(pulse, detuning, points);
        }
    } catch (const app::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalToleranceError& e) {
        std::cerr << "numerical tolerance: " << e.what() << '\n';
        return kToleranceError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
