#pragma once

#include "bifluid/types.hpp"

namespace bifluid {

/// Map from primitive to conserved variables:
/// (rho_n, rho_s, u_n, u_s) -> (rho_n, rho_s, m, e) with
/// m = rho_n u_n + rho_s u_s and
/// e = 1/2 rho_n u_n^2 + 1/2 rho_s u_s^2 + 3/2 c_tilde rho_n^{5/3}
///     + alpha (rho_n + rho_s/2)^2.
ConservedState to_conserved(const PrimitiveState& u, const ModelParams& p);

/// Inverse of to_conserved on the branch selected by `b`. Requires positive
/// densities and a nonnegative kinetic-energy discriminant. When the
/// discriminant is zero (to round-off) both branches coincide and
/// u_n = u_s = m / (rho_n + rho_s) is returned.
PrimitiveState to_primitive(const ConservedState& w, Branch b, const ModelParams& p);

/// x-flux of the conservative system, same component layout as ConservedState.
Vec4 flux(const PrimitiveState& u, const ModelParams& p);

/// Normal-fluid pressure p = c_tilde rho_n^{5/3}.
inline double pressure(double rho_n, const ModelParams& p) {
  return p.c_tilde * pow_5_3(rho_n);
}

struct JacobianF {
  Mat4 matrix;
  double det;
};

/// Jacobian of to_conserved with respect to (rho_n, rho_s, u_n, u_s).
/// Its determinant is rho_n rho_s (u_s - u_n).
JacobianF jacobian_F(const PrimitiveState& u, const ModelParams& p);

/// Jacobian of the flux with respect to the primitive variables.
Mat4 flux_jacobian_primitive(const PrimitiveState& u, const ModelParams& p);

}  // namespace bifluid
