#pragma once

#include "bistab/config.hpp"

namespace bistab {

// Subcommand drivers. Each writes its artifact files under cfg.out_dir and
// returns a process exit code: 0 success, 2 parse/validation error,
// 3 runtime failure (frozen trajectory, non-convergence), 4 I/O failure.
int run_simulate(const ExperimentConfig& cfg);
int run_analyze(const ExperimentConfig& cfg);
int run_quasipotential(const ExperimentConfig& cfg);
int run_validate(const ExperimentConfig& cfg);

}  // namespace bistab
