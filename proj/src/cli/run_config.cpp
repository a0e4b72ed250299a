#include "otto/cli/run_config.hpp"

#include <cmath>
#include <sstream>

#include "otto/cli/dataset.hpp"

namespace otto::cli {

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    if (name == "table") return OutputFormat::table;
    throw ConfigError("unknown output format '" + name + "' (expected csv, json or table)");
}

std::string to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::json: return "json";
        case OutputFormat::table: return "table";
    }
    return "csv";
}

CycleConfig<double> RunConfig::cycle() const {
    CycleConfig<double> c;
    c.hot = {T_h_K, omega_h(), k_down_hot};
    c.cold = {T_c_K, omega_c_rad_s, k_down_cold};
    c.n_expansion = n_expansion;
    c.n_compression = n_compression;
    c.noise = noise();
    if (tau_hot_s || tau_cold_s) {
        c.isochore_durations = std::make_pair(tau_hot_s ? *tau_hot_s : default_isochore_duration(c.hot),
                                              tau_cold_s ? *tau_cold_s : default_isochore_duration(c.cold));
    }
    return c;
}

namespace {

void check(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0; }

}  // namespace

void RunConfig::validate() const {
    check(positive_finite(omega_c_rad_s), "omega_c_rad_s must be positive");
    check(std::isfinite(ratio) && ratio > 1, "ratio must exceed 1");
    check(positive_finite(T_h_K) && positive_finite(T_c_K), "temperatures must be positive");
    check(T_h_K > T_c_K, "T_h_K must exceed T_c_K");
    check(std::isfinite(gamma_p_s) && gamma_p_s >= 0, "gamma_p_s must be non-negative");
    check(std::isfinite(gamma_a_s) && gamma_a_s >= 0, "gamma_a_s must be non-negative");
    check(positive_finite(k_down_hot) && positive_finite(k_down_cold), "k_down rates must be positive");
    check(n_max >= 1, "n_max must be >= 1");
    check(n_expansion >= 1 && n_compression >= 1, "cycle indices must be >= 1");
    check(!tau_hot_s || (std::isfinite(*tau_hot_s) && *tau_hot_s >= 0), "tau_hot_s must be non-negative");
    check(!tau_cold_s || (std::isfinite(*tau_cold_s) && *tau_cold_s >= 0), "tau_cold_s must be non-negative");
    check(ode_tol >= 1e-14 && ode_tol <= 1e-4, "ode_tol must lie in [1e-14, 1e-4]");
    check(quad_tol >= 1e-14 && quad_tol <= 1e-4, "quad_tol must lie in [1e-14, 1e-4]");
    check(!sweep_steps || *sweep_steps >= 2, "sweep_steps must be >= 2");
    check(!sweep_scale || *sweep_scale == "log" || *sweep_scale == "linear", "sweep_scale must be log or linear");
    check(trace_samples >= 2, "trace_samples must be >= 2");
    check(trace_segment == "expansion" || trace_segment == "compression",
          "trace_segment must be expansion or compression");
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    auto num = [](double x) { return format_double(x); };
    auto opt = [&](const std::optional<double>& x) { return x ? num(*x) : std::string("default"); };
    std::vector<std::pair<std::string, std::string>> e{
        {"omega_c_rad_s", num(omega_c_rad_s)},
        {"ratio", num(ratio)},
        {"T_h_K", num(T_h_K)},
        {"T_c_K", num(T_c_K)},
        {"gamma_p_s", num(gamma_p_s)},
        {"gamma_a_s", num(gamma_a_s)},
        {"k_down_hot", num(k_down_hot)},
        {"k_down_cold", num(k_down_cold)},
        {"n_max", std::to_string(n_max)},
        {"n_expansion", std::to_string(n_expansion)},
        {"n_compression", std::to_string(n_compression)},
        {"tau_hot_s", opt(tau_hot_s)},
        {"tau_cold_s", opt(tau_cold_s)},
        {"ode_tol", num(ode_tol)},
        {"quad_tol", num(quad_tol)},
    };
    return e;
}

std::vector<double> SweepRange::points() const {
    std::vector<double> p(steps);
    for (int i = 0; i < steps; ++i) {
        const double f = double(i) / double(steps - 1);
        p[i] = log_scale ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
    }
    p.front() = min;
    p.back() = max;
    return p;
}

SweepRange resolve_sweep(const RunConfig& config, const std::string& variable, double default_min, double default_max,
                         int default_steps, bool default_log) {
    SweepRange r{variable, config.sweep_min.value_or(default_min), config.sweep_max.value_or(default_max),
                 config.sweep_steps.value_or(default_steps),
                 config.sweep_scale ? *config.sweep_scale == "log" : default_log};
    check(std::isfinite(r.min) && std::isfinite(r.max) && r.max > r.min, "sweep_max must exceed sweep_min");
    check(r.steps >= 2, "sweep_steps must be >= 2");
    check(!r.log_scale || r.min > 0, "log sweeps need a positive sweep_min");
    return r;
}

}  // namespace otto::cli
