#include "bifluid/fvm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bifluid/entropy.hpp"
#include "bifluid/hyperbolicity.hpp"
#include "bifluid/state.hpp"

namespace bifluid {

namespace {

constexpr double kVacuum = 1e-14;

// Primitive recovery for the solver: strict conversion where both densities
// are positive, closed-form single-fluid limits where one of them has
// dropped to the vacuum floor (the flux stays polynomial there).
PrimitiveState recover(const ConservedState& w, Branch branch, const ModelParams& p, int cell,
                       double t) {
  const bool n_vac = w.rho_n <= kVacuum;
  const bool s_vac = w.rho_s <= kVacuum;
  if (!n_vac && !s_vac) {
    try {
      return to_primitive(w, branch, p);
    } catch (const Error& err) {
      throw ConversionFailure(std::string("cell ") + std::to_string(cell) + " at t=" +
                                  std::to_string(t) + ": " + err.what(),
                              cell, t);
    }
  }
  PrimitiveState u;
  u.rho_n = w.rho_n;
  u.rho_s = w.rho_s;
  if (s_vac && !n_vac) {
    u.u_n = w.m / w.rho_n;
    u.u_s = u.u_n;
  } else if (n_vac && !s_vac) {
    u.u_s = w.m / w.rho_s;
    u.u_n = u.u_s;
  }
  return u;
}

Branch update_branch(const PrimitiveState& u, Branch previous) {
  if (u.u_n > u.u_s) return Branch::NormalFaster;
  if (u.u_n < u.u_s) return Branch::SuperFaster;
  return previous;
}

SimulationFrame make_frame(double t, const std::vector<ConservedState>& cells,
                           const std::vector<Branch>& branches, const Grid1D& grid,
                           const ModelParams& p) {
  SimulationFrame frame;
  frame.t = t;
  frame.conserved = cells;
  frame.primitive.resize(cells.size());
  frame.hyperbolic_everywhere = true;
  frame.cond3_everywhere = true;
  frame.entropy_region_everywhere = true;
  frame.min_density = std::numeric_limits<double>::infinity();
  double mass_n = 0.0, mass_s = 0.0, momentum = 0.0, energy = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    frame.primitive[j] = recover(cells[j], branches[j], p, static_cast<int>(j), t);
    const PrimitiveState& u = frame.primitive[j];
    mass_n += cells[j].rho_n;
    mass_s += cells[j].rho_s;
    momentum += cells[j].m;
    energy += cells[j].e;
    frame.min_density = std::min({frame.min_density, u.rho_n, u.rho_s});
    if (u.rho_n > kVacuum && u.rho_s > kVacuum) {
      const auto conds = check_conditions(u, p);
      if (!conds.any()) frame.hyperbolic_everywhere = false;
      if (!conds.cond3) frame.cond3_everywhere = false;
      const bool us_small = u.u_s * u.u_s < 0.5 * p.alpha * u.rho_s;
      if (!us_small || !(char_poly(u, p)(0.0) > 0.0))
        frame.entropy_region_everywhere = false;
    } else {
      frame.hyperbolic_everywhere = false;
      frame.cond3_everywhere = false;
      frame.entropy_region_everywhere = false;
    }
  }
  const double dx = grid.dx();
  frame.total_mass_n = dx * mass_n;
  frame.total_mass_s = dx * mass_s;
  frame.total_momentum = dx * momentum;
  frame.total_energy = dx * energy;
  return frame;
}

}  // namespace

std::vector<ConservedState> riemann_initial_data(const PrimitiveState& u_left,
                                                 const PrimitiveState& u_right,
                                                 const Grid1D& grid, const ModelParams& p) {
  if (!(grid.x_min < 0.0 && grid.x_max > 0.0))
    throw Error("riemann_initial_data: the interface x=0 must lie inside the grid");
  const ConservedState left = to_conserved(u_left, p);
  const ConservedState right = to_conserved(u_right, p);
  std::vector<ConservedState> cells(grid.n_cells);
  for (int j = 0; j < grid.n_cells; ++j) cells[j] = grid.center(j) < 0.0 ? left : right;
  return cells;
}

double max_wave_speed(const PrimitiveState& u, const ModelParams& p) {
  const bool n_vac = u.rho_n <= kVacuum;
  const bool s_vac = u.rho_s <= kVacuum;
  if (n_vac && s_vac) return std::max(std::abs(u.u_n), std::abs(u.u_s));
  if (s_vac) {
    const double a_n = p.c() * pow_2_3(u.rho_n) + 2.0 * p.alpha * u.rho_n;
    return std::max({std::abs(u.u_n - std::sqrt(a_n)), std::abs(u.u_n + std::sqrt(a_n)),
                     std::abs(u.u_s)});
  }
  if (n_vac) {
    const double a_s = 0.5 * p.alpha * u.rho_s;
    return std::max({std::abs(u.u_s - std::sqrt(a_s)), std::abs(u.u_s + std::sqrt(a_s)),
                     std::abs(u.u_n)});
  }
  return wave_speed_bound(u, p);
}

std::vector<ConservedState> lax_friedrichs_step(const std::vector<ConservedState>& cells,
                                                std::vector<Branch>& branches, double dt,
                                                const Grid1D& grid, const SolverConfig& cfg,
                                                const ModelParams& p, double t_now,
                                                StepReport* report) {
  const int n = static_cast<int>(cells.size());
  const double dx = grid.dx();

  std::vector<Vec4> fluxes(n);
  double max_speed = 0.0;
  for (int j = 0; j < n; ++j) {
    const PrimitiveState u = recover(cells[j], branches[j], p, j, t_now);
    branches[j] = update_branch(u, branches[j]);
    fluxes[j] = flux(u, p);
    max_speed = std::max(max_speed, max_wave_speed(u, p));
  }

  const bool violated = dt * max_speed / dx > 1.0 + 1e-12;
  if (report != nullptr) {
    report->max_speed = max_speed;
    report->cfl_violated = violated;
    report->left_ghost_flux = fluxes.front();
    report->right_ghost_flux = fluxes.back();
  }
  if (violated && !cfg.fixed_ratio)
    throw CflViolation("lax_friedrichs_step: dt max|lambda|/dx = " +
                       std::to_string(dt * max_speed / dx));

  const double r = 0.5 * dt / dx;
  std::vector<ConservedState> out(n);
  for (int j = 0; j < n; ++j) {
    const int jm = std::max(j - 1, 0);      // copy ghost cells
    const int jp = std::min(j + 1, n - 1);
    const Vec4 updated =
        0.5 * (cells[jm].vec() + cells[jp].vec()) - r * (fluxes[jp] - fluxes[jm]);
    out[j] = ConservedState::from_vec(updated);
  }
  return out;
}

std::vector<SimulationFrame> run(const SolverConfig& cfg, const Grid1D& grid,
                                 const PrimitiveState& u_left, const PrimitiveState& u_right,
                                 const ModelParams& p) {
  if (!(cfg.t_final > 0.0)) throw Error("run: t_final must be positive");
  if (cfg.output_every < 1) throw Error("run: output_every must be >= 1");
  if (!cfg.fixed_ratio && !(cfg.cfl > 0.0 && cfg.cfl <= 1.0))
    throw Error("run: cfl must lie in (0, 1]");
  if (cfg.fixed_ratio && !(*cfg.fixed_ratio > 0.0))
    throw Error("run: fixed_ratio must be positive");
  std::vector<ConservedState> cells = riemann_initial_data(u_left, u_right, grid, p);
  std::vector<Branch> branches(cells.size());
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const PrimitiveState& side = grid.center(static_cast<int>(j)) < 0.0 ? u_left : u_right;
    branches[j] = cfg.fixed_branch ? *cfg.fixed_branch : branch_of(side);
  }

  for (const PrimitiveState* side : {&u_left, &u_right}) {
    if (side->rho_n > kVacuum && side->rho_s > kVacuum &&
        !check_conditions(*side, p).any())
      throw Error("run: initial data violate all hyperbolicity conditions");
  }

  std::vector<SimulationFrame> frames;
  frames.push_back(make_frame(0.0, cells, branches, grid, p));

  const double dx = grid.dx();
  double t = 0.0;
  long step = 0;
  bool warned = false;
  Vec4 boundary_integral = Vec4::Zero();
  while (t < cfg.t_final) {
    double dt;
    if (cfg.fixed_ratio) {
      dt = *cfg.fixed_ratio * dx;
    } else {
      double max_speed = 0.0;
      for (std::size_t j = 0; j < cells.size(); ++j) {
        const PrimitiveState u = recover(cells[j], branches[j], p, static_cast<int>(j), t);
        max_speed = std::max(max_speed, max_wave_speed(u, p));
      }
      dt = max_speed > 0.0 ? cfg.cfl * dx / max_speed : cfg.t_final - t;
    }
    dt = std::min(dt, cfg.t_final - t);
    StepReport report;
    cells = lax_friedrichs_step(cells, branches, dt, grid, cfg, p, t, &report);
    if (report.cfl_violated && !warned) {
      std::fprintf(stderr, "warning: dt max|lambda|/dx = %g exceeds 1 under fixed_ratio\n",
                   dt * report.max_speed / dx);
      warned = true;
    }
    boundary_integral += dt * (report.left_ghost_flux - report.right_ghost_flux);
    t += dt;
    ++step;
    if (step % cfg.output_every == 0 || t >= cfg.t_final) {
      frames.push_back(make_frame(t, cells, branches, grid, p));
      frames.back().boundary_flux_integral = boundary_integral;
    }
  }
  return frames;
}

std::vector<Plateau> find_plateaus(std::span<const double> values, double slope_tol,
                                   int min_width) {
  const int n = static_cast<int>(values.size());
  std::vector<Plateau> out;
  if (n == 0) return out;
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double range = hi - lo;
  if (range <= 0.0) {
    out.push_back({0, n, values[0], 0.5 * (n - 1)});
    return out;
  }

  // A flat cell has a small centered difference on the grid scale AND a
  // slope below the field's mean variation range/L; the second bound is
  // resolution-independent and keeps smooth wave interiors (fans, shoulders)
  // out of plateaus on fine grids where their per-cell differences vanish.
  auto flat = [&](int j) {
    const double left = values[std::max(j - 1, 0)];
    const double right = values[std::min(j + 1, n - 1)];
    const double half_diff = std::abs(right - left) * 0.5;
    return half_diff < slope_tol * range && half_diff * n < range;
  };

  // Maximal flat runs, split wherever the values drift out of the level band
  // (10 slope_tol range, the same band that separates distinct plateaus).
  // Slowly varying wave interiors pass the cell-wise slope test on fine
  // grids but drift across the band within less than min_width cells.
  const double band = 10.0 * slope_tol * range;
  struct Run {
    int begin, end;
    double sum;
    double xsum;
  };
  std::vector<Run> runs;
  auto close_segment = [&](int begin, int end, double sum, double xsum) {
    if (end - begin >= min_width) runs.push_back({begin, end, sum, xsum});
  };
  int j = 0;
  while (j < n) {
    if (!flat(j)) {
      ++j;
      continue;
    }
    int start = j;
    double sum = 0.0, xsum = 0.0;
    while (j < n && flat(j)) {
      if (j > start && std::abs(values[j] - sum / (j - start)) > band) {
        close_segment(start, j, sum, xsum);
        start = j;
        sum = 0.0;
        xsum = 0.0;
      }
      sum += values[j];
      xsum += j;
      ++j;
    }
    close_segment(start, j, sum, xsum);
  }

  std::vector<Run> merged;
  std::vector<int> counts;
  for (const Run& run : runs) {
    const int width = run.end - run.begin;
    const double mean = run.sum / width;
    if (!merged.empty() &&
        std::abs(merged.back().sum / counts.back() - mean) <= 10.0 * slope_tol * range) {
      // Same level interrupted by a wiggle: extend the previous plateau.
      merged.back().end = run.end;
      merged.back().sum += run.sum;
      merged.back().xsum += run.xsum;
      counts.back() += width;
    } else {
      merged.push_back(run);
      counts.push_back(width);
    }
  }
  for (std::size_t i = 0; i < merged.size(); ++i)
    out.push_back({merged[i].begin, merged[i].end, merged[i].sum / counts[i],
                   merged[i].xsum / counts[i]});
  return out;
}

int count_plateaus(std::span<const double> values, double slope_tol, int min_width) {
  return static_cast<int>(find_plateaus(values, slope_tol, min_width).size());
}

std::vector<double> extract_field(const SimulationFrame& frame, Field field) {
  std::vector<double> out(frame.primitive.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    switch (field) {
      case Field::RhoN: out[j] = frame.primitive[j].rho_n; break;
      case Field::RhoS: out[j] = frame.primitive[j].rho_s; break;
      case Field::UN: out[j] = frame.primitive[j].u_n; break;
      case Field::US: out[j] = frame.primitive[j].u_s; break;
    }
  }
  return out;
}

int count_plateaus(const SimulationFrame& frame, Field field, double slope_tol,
                   int min_width) {
  const std::vector<double> values = extract_field(frame, field);
  return count_plateaus(values, slope_tol, min_width);
}

}  // namespace bifluid
