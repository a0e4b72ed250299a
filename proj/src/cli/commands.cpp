#include "otto/cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include <CLI11.hpp>

#include "otto/cycle.hpp"
#include "otto/magnus.hpp"

#ifndef OTTO_VERSION
#define OTTO_VERSION "unknown"
#endif

namespace otto::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Row = std::vector<Cell>;

/// Evaluates make_row(i) for i in [0, count) on a small thread pool; rows keep index order.
Row safe_row(const std::function<Row(std::size_t)>& make_row, std::size_t i, const std::function<Row(std::size_t, const std::string&)>& on_error) {
    try {
        return make_row(i);
    } catch (const std::exception& e) {
        return on_error(i, e.what());
    }
}

std::vector<Row> parallel_rows(std::size_t count, const std::function<Row(std::size_t)>& make_row,
                               const std::function<Row(std::size_t, const std::string&)>& on_error) {
    std::vector<Row> rows(count);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) rows[i] = safe_row(make_row, i, on_error);
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    return rows;
}

Dataset make_dataset(const RunConfig& config, const std::string& name, std::vector<std::string> columns) {
    Dataset d;
    d.name = name;
    d.metadata = {{"tool", "otto"}, {"version", OTTO_VERSION}, {"command", name}};
    for (auto& kv : config.echo()) d.metadata.push_back(std::move(kv));
    d.metadata.emplace_back("format", to_string(config.format));
    d.columns = std::move(columns);
    return d;
}

void add_sweep_metadata(Dataset& d, const SweepRange& r) {
    d.metadata.emplace_back("sweep_variable", r.variable);
    d.metadata.emplace_back("sweep_min", format_double(r.min));
    d.metadata.emplace_back("sweep_max", format_double(r.max));
    d.metadata.emplace_back("sweep_steps", std::to_string(r.steps));
    d.metadata.emplace_back("sweep_scale", r.log_scale ? "log" : "linear");
}

Row nan_row(Cell first, std::size_t numeric_columns, const std::string& error) {
    Row r{std::move(first)};
    for (std::size_t i = 0; i < numeric_columns; ++i) r.emplace_back(kNaN);
    r.emplace_back(error);
    return r;
}

}  // namespace

Dataset cmd_sweep_n(const RunConfig& config) {
    config.validate();
    Dataset d = make_dataset(config, "sweep-n",
                             {"n", "mu", "tau_expansion", "delta_p_exact", "delta_p_magnus1", "delta_p_magnus2",
                              "delta_a_exact", "delta_a_magnus1", "delta_pa", "error"});
    const double wh = config.omega_h(), wc = config.omega_c_rad_s;
    const NoiseSpec<double> noise = config.noise();
    const double tol = config.ode_tol;

    d.rows = parallel_rows(
        std::size_t(config.n_max),
        [&](std::size_t i) -> Row {
            const int n = int(i) + 1;
            const AdiabatSpec<double> spec = frictionless_adiabat(wh, wc, n, noise);
            const auto combined = delta_combined(spec, n);
            return {(long long)n,
                    spec.mu,
                    frictionless_tau(wh, wc, n),
                    propagate_U3_numeric(spec, NoiseChannel::phase, tol).delta,
                    combined.phase,
                    delta_p_second(spec, n),
                    propagate_U3_numeric(spec, NoiseChannel::amplitude, tol).delta,
                    combined.amplitude,
                    combined.additive,
                    std::string()};
        },
        [](std::size_t i, const std::string& e) { return nan_row((long long)(i + 1), 8, e); });
    return d;
}

Dataset cmd_sweep_ratio(const RunConfig& config) {
    config.validate();
    const SweepRange range = resolve_sweep(config, "ratio", 2.0, 100.0, 50, true);
    if (!(range.min > 1)) throw ConfigError("sweep-ratio needs ratios above 1");
    Dataset d = make_dataset(config, "sweep-ratio",
                             {"ratio", "n_continuous", "n_integer", "delta_at_optimum", "t_min", "error"});
    add_sweep_metadata(d, range);
    const std::vector<double> ratios = range.points();
    const double wc = config.omega_c_rad_s;
    const NoiseSpec<double> noise = config.noise();

    d.rows = parallel_rows(
        ratios.size(),
        [&](std::size_t i) -> Row {
            const double wh = ratios[i] * wc;
            const auto opt = n_optimal(wh, wc, noise);
            const auto delta = delta_at_optimum(wh, wc, noise);
            return {ratios[i], opt.n_continuous, (long long)opt.n_integer, delta.printed,
                    minimum_temperature(wc, wh, config.T_h_K, noise), std::string()};
        },
        [&](std::size_t i, const std::string& e) {
            Row r = nan_row(ratios[i], 4, e);
            r[2] = (long long)0;
            return r;
        });
    return d;
}

Dataset cmd_tmin(const RunConfig& config) {
    config.validate();
    const double wh = config.omega_h();
    const SweepRange range = resolve_sweep(config, "omega_c", 2.0 * std::numbers::pi * 1e-3,
                                           2.0 * std::numbers::pi * 1e3, 25, true);
    if (!(range.min > 0) || !(range.max < wh)) throw ConfigError("tmin needs 0 < omega_c < omega_h");
    Dataset d = make_dataset(config, "tmin", {"omega_c", "tc_carnot", "tc_noisy_printed", "tc_noisy_additive", "error"});
    add_sweep_metadata(d, range);
    const std::vector<double> omegas = range.points();
    const NoiseSpec<double> noise = config.noise();
    const double th = config.T_h_K;

    d.rows = parallel_rows(
        omegas.size(),
        [&](std::size_t i) -> Row {
            const double wc = omegas[i];
            const auto delta = delta_at_optimum(wh, wc, noise);
            return {wc, carnot_temperature(wc, wh, th), tc_bound(wc, wh, th, delta.printed),
                    tc_bound(wc, wh, th, delta.additive), std::string()};
        },
        [&](std::size_t i, const std::string& e) { return nan_row(omegas[i], 3, e); });
    return d;
}

Dataset cmd_run_cycle(const RunConfig& config) {
    config.validate();
    const CycleConfig<double> cycle = config.cycle();
    try {
        cycle.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    Dataset d = make_dataset(config, "run-cycle",
                             {"T_c_K", "q_cold", "q_hot", "w_net", "cop", "refrigerating", "delta_expansion",
                              "delta_compression", "q_max_bound", "h_start", "l_start", "d_start",
                              "first_law_residual", "converged"});
    const CycleReport<double> r = cycle_energetics(cycle, config.ode_tol);
    const double q_max = max_heat(cycle, std::max(0.0, r.delta_expansion));
    d.rows.push_back({config.T_c_K, r.q_cold, r.q_hot, r.w_net, r.cop.value_or(kNaN), r.refrigerating(),
                      r.delta_expansion, r.delta_compression, q_max, r.limit_triple_start_hot.h,
                      r.limit_triple_start_hot.l, r.limit_triple_start_hot.d, r.first_law_residual, r.converged});
    return d;
}

Dataset cmd_adiabat_trace(const RunConfig& config) {
    config.validate();
    const bool expansion = config.trace_segment == "expansion";
    const double wh = config.omega_h(), wc = config.omega_c_rad_s;
    const AdiabatSpec<double> spec = expansion ? frictionless_adiabat(wh, wc, config.n_expansion, config.noise())
                                               : frictionless_adiabat(wc, wh, config.n_compression, config.noise());
    const ObservableTriple<double> start =
        expansion ? thermal_triple(wh, config.T_h_K) : thermal_triple(wc, config.T_c_K);

    Dataset d = make_dataset(config, "adiabat-trace", {"theta", "omega", "h", "l", "d", "casimir_form"});
    d.metadata.emplace_back("trace_segment", config.trace_segment);
    d.metadata.emplace_back("trace_samples", std::to_string(config.trace_samples));
    for (const auto& s : trace_adiabat(spec, start, config.trace_samples, config.ode_tol)) {
        d.rows.push_back({s.theta, s.omega, s.triple.h, s.triple.l, s.triple.d, casimir_form(s.triple, s.omega)});
    }
    return d;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    std::string format = "csv";

    CLI::App app{"Quantum Otto refrigerator with phase and amplitude noise on the adiabats"};
    app.name("otto");
    app.set_config("--config", "", "Flat key = value configuration file; command-line flags take precedence");
    app.allow_config_extras(false);
    app.require_subcommand(1, 1);
    app.fallthrough();

    app.add_option("--omega_c_rad_s", config.omega_c_rad_s, "Cold-bath frequency (rad/s)");
    app.add_option("--ratio", config.ratio, "omega_h / omega_c");
    app.add_option("--T_h_K", config.T_h_K, "Hot-bath temperature (K)");
    app.add_option("--T_c_K", config.T_c_K, "Cold-bath temperature (K)");
    app.add_option("--gamma_p_s", config.gamma_p_s, "Phase-noise strength (s)");
    app.add_option("--gamma_a_s", config.gamma_a_s, "Amplitude-noise strength (s)");
    app.add_option("--k_down_hot", config.k_down_hot, "Hot-bath downward rate (1/s)");
    app.add_option("--k_down_cold", config.k_down_cold, "Cold-bath downward rate (1/s)");
    app.add_option("--n-max,--n_max", config.n_max, "Largest cycle index in sweep-n");
    app.add_option("--n_expansion", config.n_expansion, "Cycle index of the expansion adiabat");
    app.add_option("--n_compression", config.n_compression, "Cycle index of the compression adiabat");
    app.add_option("--tau_hot_s", config.tau_hot_s, "Hot isochore duration (s); default 6/Gamma");
    app.add_option("--tau_cold_s", config.tau_cold_s, "Cold isochore duration (s); default 6/Gamma");
    app.add_option("--tol,--ode_tol", config.ode_tol, "Local error tolerance of the adaptive integrator");
    app.add_option("--quad_tol", config.quad_tol, "Quadrature tolerance");
    app.add_option("--sweep_min", config.sweep_min, "Lower end of the swept variable");
    app.add_option("--sweep_max", config.sweep_max, "Upper end of the swept variable");
    app.add_option("--sweep_steps", config.sweep_steps, "Number of sweep points (>= 2)");
    app.add_option("--sweep_scale", config.sweep_scale, "log or linear");
    app.add_option("--trace_samples", config.trace_samples, "Samples along the traced adiabat");
    app.add_option("--trace_segment", config.trace_segment, "expansion or compression");
    app.add_option("--out", config.out, "Output path (default: standard output)");
    app.add_option("--format", format, "csv, json or table");

    using Command = std::function<Dataset(const RunConfig&)>;
    Command command;
    auto add = [&](const char* name, const char* help, Command c) {
        app.add_subcommand(name, help)->callback([&command, c] { command = c; });
    };
    add("sweep-n", "Adiabaticity measures against the cycle index", cmd_sweep_n);
    add("sweep-ratio", "Optimal cycle index against omega_h / omega_c", cmd_sweep_ratio);
    add("tmin", "Minimum cold-bath temperature against omega_c", cmd_tmin);
    add("run-cycle", "Limit cycle and energetics of one configuration", cmd_run_cycle);
    add("adiabat-trace", "Observables sampled along one adiabat", cmd_adiabat_trace);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "otto: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        config.format = parse_format(format);
        const Dataset data = command(config);
        if (config.out.empty()) {
            write_dataset(data, config.format, out);
        } else {
            std::ofstream file(config.out, std::ios::binary);
            if (!file) throw ConfigError("cannot open output file '" + config.out + "'");
            write_dataset(data, config.format, file);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "otto: configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const DomainError& e) {
        err << "otto: invalid parameters: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const NonContractiveError& e) {
        err << "otto: numeric failure: " << e.what() << '\n';
        return kExitNumericFailure;
    } catch (const IntegratorError& e) {
        err << "otto: numeric failure: " << e.what() << '\n';
        return kExitNumericFailure;
    }
}

}  // namespace otto::cli
