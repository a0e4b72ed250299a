#pragma once

#include <ostream>

#include "otto/cli/dataset.hpp"
#include "otto/cli/run_config.hpp"

namespace otto::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNumericFailure = 2;

/// Adiabaticity measures against the cycle index n = 1..n_max on the expansion adiabat.
Dataset cmd_sweep_n(const RunConfig& config);
/// Optimal cycle index and minimum temperature against omega_h / omega_c.
Dataset cmd_sweep_ratio(const RunConfig& config);
/// Carnot and noisy minimum temperatures against omega_c.
Dataset cmd_tmin(const RunConfig& config);
/// Limit cycle and energetics of one refrigerator configuration.
Dataset cmd_run_cycle(const RunConfig& config);
/// Observable trajectory along one adiabat.
Dataset cmd_adiabat_trace(const RunConfig& config);

/// Command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace otto::cli
