#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bifluid/fvm.hpp"
#include "bifluid/hyperbolicity.hpp"
#include "bifluid/state.hpp"

using namespace bifluid;

namespace {

// Reference Riemann experiment (experiments/riemann_reference.cfg).
const ModelParams ref_params{1.0, 1.0};
const PrimitiveState ref_left{1.3, 1.8, 0.5, 0.2};
const PrimitiveState ref_right{0.9, 1.0, 0.05, -0.15};

std::vector<Branch> normal_branches(int n) {
  return std::vector<Branch>(n, Branch::NormalFaster);
}

}  // namespace

TEST_CASE("riemann initial data geometry") {
  const Grid1D grid{-1.0, 1.0, 4};
  CHECK(grid.center(0) == doctest::Approx(-0.75));
  CHECK(grid.center(1) == doctest::Approx(-0.25));
  CHECK(grid.center(2) == doctest::Approx(0.25));
  CHECK(grid.center(3) == doctest::Approx(0.75));
  const auto cells = riemann_initial_data(ref_left, ref_right, grid, ref_params);
  const ConservedState wl = to_conserved(ref_left, ref_params);
  const ConservedState wr = to_conserved(ref_right, ref_params);
  CHECK(cells[0].rho_n == wl.rho_n);
  CHECK(cells[1].e == wl.e);
  CHECK(cells[2].m == wr.m);
  CHECK(cells[3].rho_s == wr.rho_s);

  // constant data, and totals as the half-and-half mixture
  const auto flat = riemann_initial_data(ref_left, ref_left, grid, ref_params);
  for (const auto& c : flat) CHECK(c.e == wl.e);
  double mass = 0.0;
  for (const auto& c : cells) mass += c.rho_n;
  CHECK(grid.dx() * mass == doctest::Approx(0.5 * (wl.rho_n + wr.rho_n) * 2.0));

  const Grid1D offset{1.0, 2.0, 10};
  CHECK_THROWS_AS(riemann_initial_data(ref_left, ref_right, offset, ref_params), Error);
}

TEST_CASE("constant states are exact fixed points") {
  const Grid1D grid{-1.0, 1.0, 50};
  SolverConfig cfg;
  auto cells = riemann_initial_data(ref_left, ref_left, grid, ref_params);
  auto branches = normal_branches(grid.n_cells);
  const auto next = lax_friedrichs_step(cells, branches, 1e-3, grid, cfg, ref_params);
  for (int j = 0; j < grid.n_cells; ++j) {
    CHECK(next[j].rho_n == cells[j].rho_n);
    CHECK(next[j].rho_s == cells[j].rho_s);
    CHECK(next[j].m == cells[j].m);
    CHECK(next[j].e == cells[j].e);
  }
}

TEST_CASE("discrete conservation telescopes to the ghost fluxes") {
  const Grid1D grid{-1.0, 1.0, 200};
  SolverConfig cfg;
  auto cells = riemann_initial_data(ref_left, ref_right, grid, ref_params);
  auto branches = normal_branches(grid.n_cells);
  const double dt = 3e-4;
  for (int step = 0; step < 25; ++step) {
    StepReport report;
    const auto next =
        lax_friedrichs_step(cells, branches, dt, grid, cfg, ref_params, 0.0, &report);
    Vec4 before = Vec4::Zero(), after = Vec4::Zero();
    for (int j = 0; j < grid.n_cells; ++j) {
      before += cells[j].vec();
      after += next[j].vec();
    }
    const Vec4 lhs = grid.dx() * (after - before);
    const Vec4 rhs = -dt * (report.right_ghost_flux - report.left_ghost_flux);
    CHECK((lhs - rhs).norm() <= 1e-13 * (1.0 + rhs.norm() + grid.dx() * before.norm()));
    cells = next;
  }
}

TEST_CASE("single-fluid limit matches an independent two-equation scheme") {
  // rho_s identically zero with a fixed branch: the (rho_n, m) subsystem is
  // isentropic gas dynamics with pressure c_tilde rho^{5/3} + alpha rho^2.
  const ModelParams p{0.5, 1.0};
  const int n = 200;
  const Grid1D grid{-1.0, 1.0, n};
  SolverConfig cfg;
  cfg.fixed_branch = Branch::NormalFaster;

  const PrimitiveState left{1.0, 0.0, 0.0, 0.0};
  const PrimitiveState right{0.5, 0.0, 0.0, 0.0};
  auto cells = riemann_initial_data(left, right, grid, p);
  auto branches = normal_branches(n);

  // independent scalar implementation
  std::vector<double> rho(n), mom(n);
  for (int j = 0; j < n; ++j) {
    rho[j] = cells[j].rho_n;
    mom[j] = cells[j].m;
  }
  auto ref_flux = [&](double r, double m_, double* f1, double* f2) {
    const double u = m_ / r;
    *f1 = r * u;
    *f2 = r * u * u + p.c_tilde * pow_5_3(r) + p.alpha * r * r;
  };

  const double dt = 0.25 * grid.dx() / 2.0;
  for (int step = 0; step < 120; ++step) {
    cells = lax_friedrichs_step(cells, branches, dt, grid, cfg, p);
    std::vector<double> f1(n), f2(n), nr(n), nm(n);
    for (int j = 0; j < n; ++j) ref_flux(rho[j], mom[j], &f1[j], &f2[j]);
    const double r = 0.5 * dt / grid.dx();
    for (int j = 0; j < n; ++j) {
      const int jm = std::max(j - 1, 0);
      const int jp = std::min(j + 1, n - 1);
      nr[j] = 0.5 * (rho[jm] + rho[jp]) - r * (f1[jp] - f1[jm]);
      nm[j] = 0.5 * (mom[jm] + mom[jp]) - r * (f2[jp] - f2[jm]);
    }
    rho = nr;
    mom = nm;
  }
  for (int j = 0; j < n; ++j) {
    CHECK(cells[j].rho_n == doctest::Approx(rho[j]).epsilon(1e-12));
    CHECK(cells[j].m == doctest::Approx(mom[j]).epsilon(1e-12).scale(1.0));
    CHECK(cells[j].rho_s == 0.0);
  }
}

TEST_CASE("tiny final time gives exactly two frames") {
  const Grid1D grid{-1.0, 1.0, 64};
  SolverConfig cfg;
  cfg.t_final = 1e-9;
  const auto frames = run(cfg, grid, ref_left, ref_right, ref_params);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].t == 0.0);
  CHECK(frames[1].t == doctest::Approx(1e-9));
}

TEST_CASE("reference run conserves, stays admissible, and keeps its branch") {
  const Grid1D grid{-1.0, 1.0, 400};
  SolverConfig cfg;
  cfg.t_final = 0.32;
  cfg.output_every = 50;
  const auto frames = run(cfg, grid, ref_left, ref_right, ref_params);
  REQUIRE(frames.size() >= 3);
  const SimulationFrame& first = frames.front();
  for (const SimulationFrame& f : frames) {
    // telescoped totals: change equals the accumulated boundary flux
    const Vec4 drift(f.total_mass_n - first.total_mass_n,
                     f.total_mass_s - first.total_mass_s,
                     f.total_momentum - first.total_momentum,
                     f.total_energy - first.total_energy);
    const double scale = 1.0 + std::abs(first.total_energy) + std::abs(first.total_mass_n);
    CHECK((drift - f.boundary_flux_integral).cwiseAbs().maxCoeff() <= 1e-12 * scale);

    CHECK(f.hyperbolic_everywhere);
    CHECK(f.entropy_region_everywhere);
    CHECK(f.min_density > 0.5);
    for (const PrimitiveState& u : f.primitive) CHECK(u.u_n - u.u_s > 0.05);
  }
}

TEST_CASE("plateau counting") {
  std::vector<double> constant(300, 2.5);
  CHECK(count_plateaus(constant, 1e-3, 5) == 1);

  std::vector<double> riemann(300, 1.0);
  for (int j = 150; j < 300; ++j) riemann[j] = 2.0;
  CHECK(count_plateaus(riemann, 1e-3, 5) == 2);

  // five levels separated by sharp steps
  const double levels[5] = {0.0, 1.0, 0.5, 0.8, 0.2};
  std::vector<double> staircase;
  for (double v : levels)
    for (int i = 0; i < 60; ++i) staircase.push_back(v);
  CHECK(count_plateaus(staircase, 1e-3, 5) == 5);

  // a pure ramp is all wave, no plateau
  std::vector<double> ramp(1000);
  for (int j = 0; j < 1000; ++j) ramp[j] = j / 999.0;
  CHECK(count_plateaus(ramp, 1e-3, 5) == 0);

  // a plateau thinner than min_width does not count; the equal-level halves
  // around it coalesce back into one
  std::vector<double> thin(100, 0.0);
  for (int j = 48; j < 52; ++j) thin[j] = 1.0;
  CHECK(count_plateaus(thin, 1e-3, 8) == 1);

  // tiny wiggle inside one level is coalesced, not double-counted
  std::vector<double> wiggle(200, 1.0);
  wiggle[100] = 1.5;
  CHECK(count_plateaus(wiggle, 1e-3, 5) == 1);
}

TEST_CASE("plateau counting on simulation frames") {
  const Grid1D grid{-1.0, 1.0, 1000};
  SolverConfig cfg;
  cfg.t_final = 0.32;
  cfg.output_every = 1000000;
  const auto frames = run(cfg, grid, ref_left, ref_right, ref_params);
  CHECK(count_plateaus(frames.front(), Field::RhoN, 2e-3, default_min_width(1000)) == 2);
  CHECK(count_plateaus(frames.back(), Field::RhoN, 2e-3, default_min_width(1000)) == 5);
}

TEST_CASE("cfl violation is an error under the cfl policy, a warning otherwise") {
  const Grid1D grid{-1.0, 1.0, 50};
  auto cells = riemann_initial_data(ref_left, ref_right, grid, ref_params);
  auto branches = normal_branches(grid.n_cells);
  SolverConfig cfg;  // cfl policy
  CHECK_THROWS_AS(lax_friedrichs_step(cells, branches, 1.0, grid, cfg, ref_params),
                  CflViolation);

  SolverConfig fixed;
  fixed.fixed_ratio = 5.0;  // deliberately unstable ratio
  StepReport report;
  CHECK_NOTHROW(lax_friedrichs_step(cells, branches, 5.0 * grid.dx(), grid, fixed,
                                    ref_params, 0.0, &report));
  CHECK(report.cfl_violated);
  CHECK(report.max_speed > 0.0);
}

TEST_CASE("non-physical cells abort with cell diagnostics") {
  const Grid1D grid{-1.0, 1.0, 10};
  auto cells = riemann_initial_data(ref_left, ref_left, grid, ref_params);
  auto branches = normal_branches(grid.n_cells);
  cells[4].e = 0.1;  // below the potential-energy floor
  SolverConfig cfg;
  try {
    lax_friedrichs_step(cells, branches, 1e-4, grid, cfg, ref_params, 0.125);
    FAIL("expected ConversionFailure");
  } catch (const ConversionFailure& err) {
    CHECK(err.cell == 4);
    CHECK(err.time == 0.125);
  }
}

TEST_CASE("mirror symmetry exercises the other branch bitwise") {
  // Reflecting x and negating both velocities maps solutions to solutions
  // and swaps the branch; every arithmetic step mirrors exactly, so the two
  // runs must agree to the last bit.
  const Grid1D grid{-1.0, 1.0, 200};
  SolverConfig cfg;
  cfg.t_final = 0.06;
  cfg.output_every = 1000000;
  const PrimitiveState mirrored_left{ref_right.rho_n, ref_right.rho_s, -ref_right.u_n,
                                     -ref_right.u_s};
  const PrimitiveState mirrored_right{ref_left.rho_n, ref_left.rho_s, -ref_left.u_n,
                                      -ref_left.u_s};
  const auto base = run(cfg, grid, ref_left, ref_right, ref_params);
  const auto mirror = run(cfg, grid, mirrored_left, mirrored_right, ref_params);
  REQUIRE(base.size() == mirror.size());
  const SimulationFrame& a = base.back();
  const SimulationFrame& b = mirror.back();
  for (int j = 0; j < grid.n_cells; ++j) {
    const ConservedState& u = a.conserved[j];
    const ConservedState& v = b.conserved[grid.n_cells - 1 - j];
    CHECK(u.rho_n == v.rho_n);
    CHECK(u.rho_s == v.rho_s);
    CHECK(u.m == -v.m);
    CHECK(u.e == v.e);
    CHECK(a.primitive[j].u_n == -b.primitive[grid.n_cells - 1 - j].u_n);
  }
}

TEST_CASE("fixed time-step ratio drives the run when set") {
  const Grid1D grid{-1.0, 1.0, 100};
  SolverConfig cfg;
  cfg.fixed_ratio = 0.1;  // well inside the stability bound here
  cfg.t_final = 0.05;
  cfg.output_every = 10;
  const auto frames = run(cfg, grid, ref_left, ref_right, ref_params);
  REQUIRE(frames.size() >= 2);
  // dt = fixed_ratio dx exactly, except for the clipped last step
  const double dt = 0.1 * grid.dx();
  CHECK(frames[1].t == doctest::Approx(10 * dt));
  CHECK(frames.back().t == doctest::Approx(0.05));

  SolverConfig bad;
  bad.output_every = 0;
  bad.t_final = 0.1;
  CHECK_THROWS_AS(run(bad, grid, ref_left, ref_right, ref_params), Error);
  SolverConfig bad_cfl;
  bad_cfl.cfl = 1.5;
  bad_cfl.t_final = 0.1;
  CHECK_THROWS_AS(run(bad_cfl, grid, ref_left, ref_right, ref_params), Error);
}

TEST_CASE("run rejects initial data outside every hyperbolicity condition") {
  const ModelParams p{1.0, 0.6};
  const PrimitiveState bad{8.0, 1.0, 5.0, 0.0};
  const Grid1D grid{-1.0, 1.0, 16};
  SolverConfig cfg;
  CHECK_THROWS_AS(run(cfg, grid, bad, bad, p), Error);
}

TEST_CASE("wave speed bounds cover the degenerate limits") {
  const ModelParams p{0.5, 1.0};
  const PrimitiveState single{1.0, 0.0, 0.4, 0.0};
  const double a_n = p.c() * pow_2_3(1.0) + 2.0 * p.alpha;
  CHECK(max_wave_speed(single, p) == doctest::Approx(0.4 + std::sqrt(a_n)));

  const PrimitiveState vacuum{0.0, 0.0, -0.7, 0.2};
  CHECK(max_wave_speed(vacuum, p) == doctest::Approx(0.7));

  // the coupled bound majorizes the certified spectrum
  const PrimitiveState coupled{1.2, 0.9, 0.3, -0.1};
  const Spectrum spec = eigenvalues(coupled, p);
  REQUIRE(spec.certified);
  CHECK(max_wave_speed(coupled, p) >= spec.max_abs());
}
