#include "bifluid/rankine_hugoniot.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "bifluid/entropy.hpp"
#include "bifluid/hyperbolicity.hpp"
#include "bifluid/state.hpp"

namespace bifluid {

namespace {

PrimitiveState boosted(const PrimitiveState& u, double sigma) {
  return {u.rho_n, u.rho_s, u.u_n - sigma, u.u_s - sigma};
}

double condition_number(const Mat4& m) {
  Eigen::JacobiSVD<Mat4> svd(m);
  const double smin = svd.singularValues().minCoeff();
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return svd.singularValues().maxCoeff() / smin;
}

// Damped Newton for J(U, sigma) = target. Returns true on convergence.
bool newton_solve(PrimitiveState& u, double sigma, const Vec4& target, const ModelParams& p,
                  const TraceOptions& opts, double tol, double* residual_norm) {
  Vec4 res = shock_frame_flux(u, sigma, p) - target;
  double norm = res.norm();
  // Aim three digits below the acceptance tolerance; quadratic convergence
  // makes the extra iterations essentially free.
  const double aim = 1e-3 * tol;
  for (int it = 0; it < opts.max_newton_iters; ++it) {
    if (norm <= aim) break;
    const Mat4 jac = jacobian_J(u, sigma, p);
    const Vec4 step = jac.fullPivLu().solve(-res);
    if (!step.allFinite()) return false;
    double damping = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      const Vec4 trial_vec = u.vec() + damping * step;
      if (trial_vec[0] > opts.density_floor && trial_vec[1] > opts.density_floor) {
        const PrimitiveState trial = PrimitiveState::from_vec(trial_vec);
        const Vec4 trial_res = shock_frame_flux(trial, sigma, p) - target;
        const double trial_norm = trial_res.norm();
        if (trial_norm < norm) {
          u = trial;
          res = trial_res;
          norm = trial_norm;
          accepted = true;
          break;
        }
      }
      damping *= 0.5;
    }
    if (!accepted) break;
  }
  *residual_norm = norm;
  return norm <= tol;
}

}  // namespace

Vec4 rh_residual(const PrimitiveState& u_minus, const PrimitiveState& u_plus, double sigma,
                 const ModelParams& p) {
  const Vec4 dflux = flux(u_plus, p) - flux(u_minus, p);
  const Vec4 dcons = to_conserved(u_plus, p).vec() - to_conserved(u_minus, p).vec();
  return dflux - sigma * dcons;
}

Vec4 rh_reduced_residual(const PrimitiveState& u_minus, const PrimitiveState& u_plus,
                         double sigma, const ModelParams& p) {
  if (!(u_minus.rho_n > 0.0) || !(u_minus.rho_s > 0.0) || !(u_plus.rho_n > 0.0) ||
      !(u_plus.rho_s > 0.0))
    throw NonpositiveDensity("rh_reduced_residual: specific volumes need rho > 0");
  const double mn = u_minus.rho_n * (u_minus.u_n - sigma);
  const double ms = u_minus.rho_s * (u_minus.u_s - sigma);
  const double r_minus = 2.0 * u_minus.rho_n + u_minus.rho_s;
  const double r_plus = 2.0 * u_plus.rho_n + u_plus.rho_s;
  Vec4 res;
  res[0] = u_plus.rho_n * (u_plus.u_n - sigma) - mn;
  res[1] = u_plus.rho_s * (u_plus.u_s - sigma) - ms;
  res[2] = mn * mn * (1.0 / u_plus.rho_n - 1.0 / u_minus.rho_n) +
           ms * ms * (1.0 / u_plus.rho_s - 1.0 / u_minus.rho_s) +
           p.c_tilde * (pow_5_3(u_plus.rho_n) - pow_5_3(u_minus.rho_n)) +
           0.25 * p.alpha * (r_plus * r_plus - r_minus * r_minus);
  const double tn_p = 1.0 / u_plus.rho_n, tn_m = 1.0 / u_minus.rho_n;
  const double ts_p = 1.0 / u_plus.rho_s, ts_m = 1.0 / u_minus.rho_s;
  res[3] = mn * mn * mn * (tn_p * tn_p - tn_m * tn_m) +
           ms * ms * ms * (ts_p * ts_p - ts_m * ts_m) +
           5.0 * p.c_tilde * mn * (pow_2_3(u_plus.rho_n) - pow_2_3(u_minus.rho_n)) +
           p.alpha * (2.0 * mn + ms) * (r_plus - r_minus);
  return res;
}

Vec4 shock_frame_flux(const PrimitiveState& u, double sigma, const ModelParams& p) {
  return flux(boosted(u, sigma), p);
}

Mat4 jacobian_J(const PrimitiveState& u, double sigma, const ModelParams& p) {
  return flux_jacobian_primitive(boosted(u, sigma), p);
}

ShockCurve trace_shock_curve(const PrimitiveState& u_minus, double sigma0, double sigma_span,
                             int n_steps, const ModelParams& p, TraceDirection direction,
                             const TraceOptions& opts) {
  if (n_steps < 1) throw Error("trace_shock_curve: n_steps must be >= 1");
  // det D_U J = P(sigma) * rho_n rho_s (u_s - u_n); the second factor does not
  // depend on sigma, so the seed is structurally untraceable exactly when it
  // vanishes. P(sigma0) = 0 only marks the branch point the kick handles.
  if (!(u_minus.rho_n > 0.0) || !(u_minus.rho_s > 0.0) || u_minus.u_n == u_minus.u_s)
    throw SeedJacobianSingular(
        "trace_shock_curve: D_U J is singular for every sigma at this left state");

  ShockCurve curve;
  curve.u_minus = u_minus;
  curve.sigma0 = sigma0;
  curve.direction = direction;
  curve.seed_condition_number = condition_number(jacobian_J(u_minus, sigma0, p));
  curve.points.push_back({sigma0, u_minus, 0.0, 0.0});

  const double dstep =
      (direction == TraceDirection::IncreasingSigma ? 1.0 : -1.0) * sigma_span / n_steps;

  // Kick direction: eigenvector of the family whose eigenvalue is nearest
  // sigma0, scaled by the weak-shock relation lambda(U+) ~ 2 sigma - lambda(U-).
  const Spectrum spec = eigenvalues(u_minus, p);
  int family = 0;
  for (int k = 1; k < 4; ++k)
    if (std::abs(spec.lambdas[k] - sigma0) < std::abs(spec.lambdas[family] - sigma0))
      family = k;
  Vec4 kick_dir = Vec4::Zero();
  double gnl = 0.0;
  try {
    if (opts.kick_eps <= 0.0) throw Error("kick disabled");
    kick_dir = eigenvector(spec.lambdas[family], u_minus, p);
    kick_dir.normalize();
    const Vec4 grad = eigenvalue_gradient(spec.lambdas[family], u_minus, p);
    gnl = grad.dot(kick_dir);
    if (gnl < 0.0) {
      kick_dir = -kick_dir;
      gnl = -gnl;
    }
  } catch (const Error&) {
    kick_dir.setZero();
  }

  PrimitiveState prev2 = u_minus;
  PrimitiveState prev = u_minus;
  for (int k = 1; k <= n_steps; ++k) {
    const double sigma = sigma0 + k * dstep;
    const Vec4 target = shock_frame_flux(u_minus, sigma, p);
    const double tol = opts.tol_factor * (1.0 + target.norm());

    PrimitiveState guess;
    std::vector<Vec4> starts;
    if (k == 1) {
      if (kick_dir.squaredNorm() > 0.0) {
        double amp = (gnl > 1e-12) ? 2.0 * dstep / gnl : opts.kick_eps;
        if (std::abs(amp) < opts.kick_eps)
          amp = std::copysign(opts.kick_eps, amp == 0.0 ? dstep : amp);
        for (double factor : {1.0, 2.0, 4.0, 0.5})
          starts.push_back(u_minus.vec() + factor * amp * kick_dir);
      }
      starts.push_back(u_minus.vec());
    } else {
      // Secant predictor keeps Newton on the nontrivial branch (prev2 is the
      // seed itself when k = 2).
      starts.push_back(prev.vec() + (prev.vec() - prev2.vec()));
      starts.push_back(prev.vec());
    }

    bool ok = false;
    double residual_norm = 0.0;
    for (const Vec4& s : starts) {
      if (!(s[0] > opts.density_floor) || !(s[1] > opts.density_floor)) continue;
      PrimitiveState trial = PrimitiveState::from_vec(s);
      if (newton_solve(trial, sigma, target, p, opts, tol, &residual_norm)) {
        if (k == 1 && kick_dir.squaredNorm() > 0.0 &&
            (trial.vec() - u_minus.vec()).norm() < 1e-3 * opts.kick_eps) {
          // Collapsed back to the trivial root; try the next start.
          continue;
        }
        guess = trial;
        ok = true;
        break;
      }
    }
    if (!ok && k == 1) {
      // No shock branch crosses the trivial one here; the trivial solution is
      // the honest continuation.
      PrimitiveState trivial = u_minus;
      if (newton_solve(trivial, sigma, target, p, opts, tol, &residual_norm)) {
        guess = trivial;
        ok = true;
      }
    }
    if (!ok || guess.rho_n <= opts.density_floor || guess.rho_s <= opts.density_floor) {
      curve.truncated = true;
      curve.truncated_at_step = k;
      break;
    }
    const double diss = shock_entropy_dissipation(u_minus, guess, sigma, p);
    curve.points.push_back({sigma, guess, residual_norm, diss});
    prev2 = prev;
    prev = guess;
  }
  return curve;
}

ShockClassification classify_shock(const ShockPoint& point, const PrimitiveState& u_minus,
                                   const ModelParams& p) {
  ShockClassification out;
  const Spectrum minus = eigenvalues(u_minus, p);
  const Spectrum plus = eigenvalues(point.u_plus, p);
  const double slack = 1e-8 * (1.0 + std::abs(point.sigma));
  int matches = 0;
  for (int k = 0; k < 4; ++k) {
    if (plus.lambdas[k] <= point.sigma + slack && point.sigma <= minus.lambdas[k] + slack) {
      out.family = k + 1;
      ++matches;
    }
  }
  if (matches != 1) out.family = 0;
  out.lax_ok = matches == 1;
  const double scale = std::abs(entropy_E(u_minus, p)) + std::abs(entropy_E(point.u_plus, p)) +
                       std::abs(point.sigma) + 1.0;
  out.dissipation_ok = point.dissipation >= -1e-12 * scale;
  return out;
}

}  // namespace bifluid
