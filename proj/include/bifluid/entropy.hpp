#pragma once

#include "bifluid/types.hpp"

namespace bifluid {

/// Convex entropy of the system: the total physical energy
/// E = 1/2 rho_n u_n^2 + 1/2 rho_s u_s^2 + (9/10) c rho_n^{5/3}
///     + alpha (rho_n + rho_s/2)^2.
double entropy_E(const PrimitiveState& u, const ModelParams& p);

/// Entropy flux G = 1/2 rho_n u_n^3 + 1/2 rho_s u_s^3
///     + (3/2) c rho_n^{5/3} u_n + alpha (rho_n + rho_s/2)(2 rho_n u_n + rho_s u_s).
double entropy_G(const PrimitiveState& u, const ModelParams& p);

/// Hessian of E with respect to the primitive variables.
Mat4 entropy_hessian(const PrimitiveState& u, const ModelParams& p);

/// X^T (Hessian E) X via the explicit matrix.
double hessian_quadratic_form(const PrimitiveState& u, const Vec4& x, const ModelParams& p);

/// Same quadratic form written as a sum of completed squares; defined
/// whenever alpha rho_s != 2 u_s^2 and rho_n, rho_s > 0.
double hessian_quadratic_form_completed(const PrimitiveState& u, const Vec4& x,
                                        const ModelParams& p);

/// Membership in the admissible set: positive densities, one of the three
/// hyperbolicity conditions, u_s^2 < (alpha/2) rho_s, P(0) > 0 and u_n != u_s.
bool in_admissible_set(const PrimitiveState& u, const ModelParams& p);

/// D = sigma (E(U+) - E(U-)) - (G(U+) - G(U-)); D >= 0 is the distributional
/// entropy inequality for a shock of speed sigma.
double shock_entropy_dissipation(const PrimitiveState& u_minus, const PrimitiveState& u_plus,
                                 double sigma, const ModelParams& p);

struct EntropyReport {
  double E = 0.0;
  double G = 0.0;
  bool us_small = false;      // u_s^2 < (alpha/2) rho_s
  bool pa0_positive = false;  // P(0) > 0
  double min_quadratic_form = 0.0;
};

/// Evaluates E, G, the two convexity conditions and the smallest value of
/// the Hessian quadratic form over `n_probes` random unit directions.
EntropyReport entropy_report(const PrimitiveState& u, const ModelParams& p,
                             int n_probes = 1000, unsigned seed = 12345);

}  // namespace bifluid
