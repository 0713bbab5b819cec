#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bifluid/types.hpp"

namespace bifluid {

struct Grid1D {
  double x_min = -1.0;
  double x_max = 1.0;
  int n_cells = 1000;

  double dx() const { return (x_max - x_min) / n_cells; }
  double center(int j) const { return x_min + (j + 0.5) * dx(); }
};

enum class Field { RhoN, RhoS, UN, US };

struct SolverConfig {
  double cfl = 0.9;                      // used unless fixed_ratio is set
  std::optional<double> fixed_ratio;     // dt/dx override
  double t_final = 0.1;
  int output_every = 100;                // frame cadence in steps
  std::optional<Branch> fixed_branch;    // branch persists per cell when unset
};

struct SimulationFrame {
  double t = 0.0;
  std::vector<ConservedState> conserved;
  std::vector<PrimitiveState> primitive;
  double total_mass_n = 0.0;
  double total_mass_s = 0.0;
  double total_momentum = 0.0;
  double total_energy = 0.0;
  // integral of (flux at left ghost - flux at right ghost) dt since t=0;
  // totals(t) - totals(0) equals this exactly by the telescoping identity
  Vec4 boundary_flux_integral = Vec4::Zero();
  bool hyperbolic_everywhere = false;   // cond1 or cond2 or cond3 in every cell
  bool cond3_everywhere = false;
  bool entropy_region_everywhere = false;
  double min_density = 0.0;
};

/// Piecewise-constant Riemann data: cells with center < 0 get the left state.
std::vector<ConservedState> riemann_initial_data(const PrimitiveState& u_left,
                                                 const PrimitiveState& u_right,
                                                 const Grid1D& grid, const ModelParams& p);

struct StepReport {
  double max_speed = 0.0;
  bool cfl_violated = false;
  Vec4 left_ghost_flux = Vec4::Zero();
  Vec4 right_ghost_flux = Vec4::Zero();
};

/// One Lax-Friedrichs step with copy (outflow) ghost cells:
/// U_j' = 1/2 (U_{j-1} + U_{j+1}) - dt/(2 dx) (H(U_{j+1}) - H(U_{j-1})).
/// `branches` carries the per-cell branch between steps and is updated from
/// the recovered velocities. Throws CflViolation when dt max|lambda|/dx > 1
/// under the CFL policy (warning only under fixed_ratio, see report), and
/// ConversionFailure when a cell leaves the image of the primitive map.
std::vector<ConservedState> lax_friedrichs_step(const std::vector<ConservedState>& cells,
                                                std::vector<Branch>& branches, double dt,
                                                const Grid1D& grid, const SolverConfig& cfg,
                                                const ModelParams& p, double t_now = 0.0,
                                                StepReport* report = nullptr);

/// Runs the solver to t_final, emitting frames every `output_every` steps and
/// at the exact final time (last step clipped).
std::vector<SimulationFrame> run(const SolverConfig& cfg, const Grid1D& grid,
                                 const PrimitiveState& u_left, const PrimitiveState& u_right,
                                 const ModelParams& p);

/// Largest |lambda| bound for a cell; certified spectra where the densities
/// are positive, closed-form degenerate limits otherwise.
double max_wave_speed(const PrimitiveState& u, const ModelParams& p);

struct Plateau {
  int begin = 0;  // first cell
  int end = 0;    // one past the last cell of the final run
  double mean = 0.0;
  double x_mean = 0.0;  // mean cell index (grid-free position proxy)
};

/// Maximal flat runs of at least min_width cells, where flat means the
/// centered difference stays below slope_tol times the field range;
/// consecutive runs whose means differ by no more than 10 slope_tol range
/// are coalesced. A constant field yields a single plateau.
std::vector<Plateau> find_plateaus(std::span<const double> values, double slope_tol,
                                   int min_width);

int count_plateaus(std::span<const double> values, double slope_tol = 1e-3,
                   int min_width = 5);

int count_plateaus(const SimulationFrame& frame, Field field, double slope_tol = 1e-3,
                   int min_width = 5);

std::vector<double> extract_field(const SimulationFrame& frame, Field field);

/// min_width default policy: max(5, n_cells / 100).
inline int default_min_width(int n_cells) { return std::max(5, n_cells / 100); }

}  // namespace bifluid
