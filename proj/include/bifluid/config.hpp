#pragma once

#include <string>

#include "bifluid/fvm.hpp"
#include "bifluid/types.hpp"

namespace bifluid {

/// One reproducible Riemann experiment: model constants, grid, solver policy
/// and the two initial states.
struct ExperimentConfig {
  ModelParams params;
  Grid1D grid;
  SolverConfig solver;
  PrimitiveState left;
  PrimitiveState right;
};

/// Applies one key=value assignment. Recognized keys: alpha, c_tilde, x_min,
/// x_max, n_cells, t_final, cfl, fixed_ratio, output_every and
/// {left,right}.{rho_n,rho_s,u_n,u_s}. Unknown keys raise ConfigError.
void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value);

/// Parses a plain-text key=value file ('#' starts a comment).
ExperimentConfig load_config(const std::string& path);

}  // namespace bifluid
