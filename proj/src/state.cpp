#include "bifluid/state.hpp"

#include <cmath>

namespace bifluid {

namespace {
constexpr double kVacuum = 1e-14;
}

ConservedState to_conserved(const PrimitiveState& u, const ModelParams& p) {
  const double pot = u.rho_n + 0.5 * u.rho_s;
  ConservedState w;
  w.rho_n = u.rho_n;
  w.rho_s = u.rho_s;
  w.m = u.rho_n * u.u_n + u.rho_s * u.u_s;
  w.e = 0.5 * u.rho_n * u.u_n * u.u_n + 0.5 * u.rho_s * u.u_s * u.u_s +
        1.5 * p.c_tilde * pow_5_3(u.rho_n) + p.alpha * pot * pot;
  return w;
}

PrimitiveState to_primitive(const ConservedState& w, Branch b, const ModelParams& p) {
  if (w.rho_n < kVacuum || w.rho_s < kVacuum) {
    throw NonpositiveDensity("to_primitive: rho_n=" + std::to_string(w.rho_n) +
                             " rho_s=" + std::to_string(w.rho_s));
  }
  const double pot = w.rho_n + 0.5 * w.rho_s;
  const double e_kin = w.e - 1.5 * p.c_tilde * pow_5_3(w.rho_n) - p.alpha * pot * pot;
  const double rho = w.rho_n + w.rho_s;

  // Solve m = rho_n u_n + rho_s u_s, e_kin = 1/2 rho_n u_n^2 + 1/2 rho_s u_s^2
  // for u_s; the discriminant is rho_n rho_s (2 rho e_kin - m^2).
  const double raw = 2.0 * rho * e_kin - w.m * w.m;
  const double scale = 2.0 * rho * std::abs(e_kin) + w.m * w.m;
  if (raw < -1e-12 * scale) {
    throw NegativeDiscriminant("to_primitive: conserved state outside the image of the "
                               "primitive map (kinetic residual " +
                               std::to_string(raw) + ")");
  }
  PrimitiveState u;
  u.rho_n = w.rho_n;
  u.rho_s = w.rho_s;
  if (raw <= 0.0) {
    u.u_n = u.u_s = w.m / rho;
    return u;
  }
  const double root = std::sqrt(w.rho_n * w.rho_s * raw);
  const double signed_root = (b == Branch::NormalFaster) ? -root : root;
  u.u_s = (w.m * w.rho_s + signed_root) / (w.rho_s * rho);
  u.u_n = (w.m - w.rho_s * u.u_s) / w.rho_n;
  return u;
}

Vec4 flux(const PrimitiveState& u, const ModelParams& p) {
  const double r = 2.0 * u.rho_n + u.rho_s;
  const double pot = u.rho_n + 0.5 * u.rho_s;
  Vec4 h;
  h[0] = u.rho_n * u.u_n;
  h[1] = u.rho_s * u.u_s;
  h[2] = u.rho_n * u.u_n * u.u_n + u.rho_s * u.u_s * u.u_s + p.c_tilde * pow_5_3(u.rho_n) +
         0.25 * p.alpha * r * r;
  h[3] = 0.5 * u.rho_n * u.u_n * u.u_n * u.u_n + 0.5 * u.rho_s * u.u_s * u.u_s * u.u_s +
         2.5 * p.c_tilde * pow_5_3(u.rho_n) * u.u_n +
         p.alpha * pot * (2.0 * u.rho_n * u.u_n + u.rho_s * u.u_s);
  return h;
}

JacobianF jacobian_F(const PrimitiveState& u, const ModelParams& p) {
  const double pot = u.rho_n + 0.5 * u.rho_s;
  Mat4 j = Mat4::Zero();
  j(0, 0) = 1.0;
  j(1, 1) = 1.0;
  j(2, 0) = u.u_n;
  j(2, 1) = u.u_s;
  j(2, 2) = u.rho_n;
  j(2, 3) = u.rho_s;
  j(3, 0) = 0.5 * u.u_n * u.u_n + 2.5 * p.c_tilde * pow_2_3(u.rho_n) + 2.0 * p.alpha * pot;
  j(3, 1) = 0.5 * u.u_s * u.u_s + p.alpha * pot;
  j(3, 2) = u.rho_n * u.u_n;
  j(3, 3) = u.rho_s * u.u_s;
  return {j, j.determinant()};
}

Mat4 flux_jacobian_primitive(const PrimitiveState& u, const ModelParams& p) {
  const double r = 2.0 * u.rho_n + u.rho_s;
  const double mom = 2.0 * u.rho_n * u.u_n + u.rho_s * u.u_s;
  Mat4 j = Mat4::Zero();
  j(0, 0) = u.u_n;
  j(0, 2) = u.rho_n;
  j(1, 1) = u.u_s;
  j(1, 3) = u.rho_s;
  j(2, 0) = u.u_n * u.u_n + (5.0 / 3.0) * p.c_tilde * pow_2_3(u.rho_n) + p.alpha * r;
  j(2, 1) = u.u_s * u.u_s + 0.5 * p.alpha * r;
  j(2, 2) = 2.0 * u.rho_n * u.u_n;
  j(2, 3) = 2.0 * u.rho_s * u.u_s;
  j(3, 0) = 0.5 * u.u_n * u.u_n * u.u_n + (25.0 / 6.0) * p.c_tilde * pow_2_3(u.rho_n) * u.u_n +
            p.alpha * mom + p.alpha * r * u.u_n;
  j(3, 1) = 0.5 * u.u_s * u.u_s * u.u_s + 0.5 * p.alpha * mom + 0.5 * p.alpha * r * u.u_s;
  j(3, 2) = 1.5 * u.rho_n * u.u_n * u.u_n + 2.5 * p.c_tilde * pow_5_3(u.rho_n) +
            p.alpha * r * u.rho_n;
  j(3, 3) = 1.5 * u.rho_s * u.u_s * u.u_s + 0.5 * p.alpha * r * u.rho_s;
  return j;
}

}  // namespace bifluid
