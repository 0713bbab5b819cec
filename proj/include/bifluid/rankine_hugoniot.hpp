#pragma once

#include <vector>

#include "bifluid/types.hpp"

namespace bifluid {

/// Raw jump-condition residual H(U+) - H(U-) - sigma (F(U+) - F(U-)).
Vec4 rh_residual(const PrimitiveState& u_minus, const PrimitiveState& u_plus, double sigma,
                 const ModelParams& p);

/// Reduced residual ([rho_n w_n], [rho_s w_s], RH3, RH4) with the mass fluxes
/// M_n, M_s evaluated from the minus state. Vanishes exactly where the raw
/// residual does.
Vec4 rh_reduced_residual(const PrimitiveState& u_minus, const PrimitiveState& u_plus,
                         double sigma, const ModelParams& p);

/// The jump map J(U, sigma): the flux evaluated in the frame moving at the
/// shock speed, J(U, sigma) = H(rho_n, rho_s, u_n - sigma, u_s - sigma).
/// [J] = 0 is equivalent to the jump conditions.
Vec4 shock_frame_flux(const PrimitiveState& u, double sigma, const ModelParams& p);

/// Analytic Jacobian of J with respect to (rho_n, rho_s, u_n, u_s).
Mat4 jacobian_J(const PrimitiveState& u, double sigma, const ModelParams& p);

struct ShockPoint {
  double sigma = 0.0;
  PrimitiveState u_plus;
  double residual_norm = 0.0;
  double dissipation = 0.0;
};

enum class TraceDirection { IncreasingSigma, DecreasingSigma };

struct ShockCurve {
  PrimitiveState u_minus;
  double sigma0 = 0.0;
  TraceDirection direction = TraceDirection::IncreasingSigma;
  std::vector<ShockPoint> points;       // first point is the trivial solution
  double seed_condition_number = 0.0;   // cond of D_U J at (U-, sigma0)
  bool truncated = false;
  int truncated_at_step = -1;
};

struct TraceOptions {
  double kick_eps = 1e-3;       // floor for the first-step kick amplitude
  double tol_factor = 1e-10;    // residual tolerance factor per point
  int max_newton_iters = 50;
  int max_halvings = 8;
  double density_floor = 1e-10;
};

/// Traces the one-parameter family of right states U+(sigma) with
/// J(U+, sigma) = J(U-, sigma), stepping sigma away from sigma0. Each accepted
/// point satisfies |J(U+) - J(U-)| <= tol_factor (1 + |J(U-)|). The first
/// off-seed step is kicked along the eigenvector of the characteristic family
/// nearest sigma0 so the continuation leaves the trivial branch whenever a
/// shock branch crosses it; the curve truncates (recorded, never silent) at
/// the first Newton failure or density collapse.
ShockCurve trace_shock_curve(const PrimitiveState& u_minus, double sigma0, double sigma_span,
                             int n_steps, const ModelParams& p,
                             TraceDirection direction = TraceDirection::IncreasingSigma,
                             const TraceOptions& opts = {});

struct ShockClassification {
  int family = 0;  // 1..4, or 0 when no family (or several) matches
  bool lax_ok = false;
  bool dissipation_ok = false;
};

/// Lax inequality lambda_k(U+) <= sigma <= lambda_k(U-) and the sign of the
/// entropy dissipation for a traced point.
ShockClassification classify_shock(const ShockPoint& point, const PrimitiveState& u_minus,
                                   const ModelParams& p);

}  // namespace bifluid
