#pragma once

#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "otto/cycle.hpp"

namespace otto::cli {

/// Invalid or inconsistent run configuration (exit code 1).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json, table };

OutputFormat parse_format(const std::string& name);
std::string to_string(OutputFormat format);

/// Every tunable of a run. Field names match the configuration-file keys.
/// Defaults reproduce the noisy 25:1 scenario with omega_c = 2 pi x 1000 rad/s.
struct RunConfig {
    double omega_c_rad_s = 2.0 * std::numbers::pi * 1000.0;
    double ratio = 25.0;  // omega_h / omega_c
    double T_h_K = 300.0;
    double T_c_K = 50.0;
    double gamma_p_s = 1e-6;
    double gamma_a_s = 5e-9;
    double k_down_hot = 1e4;   // 1/s
    double k_down_cold = 1e4;  // 1/s
    int n_max = 30;
    int n_expansion = 1;
    int n_compression = 1;
    std::optional<double> tau_hot_s;   // hot isochore contact time; 6/Gamma when unset
    std::optional<double> tau_cold_s;  // cold isochore contact time; 6/Gamma when unset
    double ode_tol = 1e-10;
    double quad_tol = 1e-10;

    std::optional<double> sweep_min;
    std::optional<double> sweep_max;
    std::optional<int> sweep_steps;
    std::optional<std::string> sweep_scale;  // "log" | "linear"

    int trace_samples = 101;
    std::string trace_segment = "expansion";

    std::string out;  // empty: standard output
    OutputFormat format = OutputFormat::csv;

    double omega_h() const { return ratio * omega_c_rad_s; }
    NoiseSpec<double> noise() const { return {gamma_p_s, gamma_a_s}; }
    CycleConfig<double> cycle() const;

    /// Throws ConfigError on any violated invariant.
    void validate() const;

    /// Ordered key/value echo for dataset metadata.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Resolved sweep range for one command.
struct SweepRange {
    std::string variable;
    double min;
    double max;
    int steps;
    bool log_scale;

    std::vector<double> points() const;
};

SweepRange resolve_sweep(const RunConfig& config, const std::string& variable, double default_min, double default_max,
                         int default_steps, bool default_log);

}  // namespace otto::cli
