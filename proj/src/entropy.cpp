#include "bifluid/entropy.hpp"

#include <cmath>
#include <random>

#include "bifluid/hyperbolicity.hpp"

namespace bifluid {

double entropy_E(const PrimitiveState& u, const ModelParams& p) {
  const double pot = u.rho_n + 0.5 * u.rho_s;
  return 0.5 * u.rho_n * u.u_n * u.u_n + 0.5 * u.rho_s * u.u_s * u.u_s +
         0.9 * p.c() * pow_5_3(u.rho_n) + p.alpha * pot * pot;
}

double entropy_G(const PrimitiveState& u, const ModelParams& p) {
  const double pot = u.rho_n + 0.5 * u.rho_s;
  return 0.5 * u.rho_n * u.u_n * u.u_n * u.u_n + 0.5 * u.rho_s * u.u_s * u.u_s * u.u_s +
         1.5 * p.c() * pow_5_3(u.rho_n) * u.u_n +
         p.alpha * pot * (2.0 * u.rho_n * u.u_n + u.rho_s * u.u_s);
}

Mat4 entropy_hessian(const PrimitiveState& u, const ModelParams& p) {
  Mat4 h = Mat4::Zero();
  h(0, 0) = p.c() / std::cbrt(u.rho_n) + 2.0 * p.alpha;
  h(0, 1) = h(1, 0) = p.alpha;
  h(0, 2) = h(2, 0) = u.u_n;
  h(1, 1) = 0.5 * p.alpha;
  h(1, 3) = h(3, 1) = u.u_s;
  h(2, 2) = u.rho_n;
  h(3, 3) = u.rho_s;
  return h;
}

double hessian_quadratic_form(const PrimitiveState& u, const Vec4& x, const ModelParams& p) {
  return x.dot(entropy_hessian(u, p) * x);
}

double hessian_quadratic_form_completed(const PrimitiveState& u, const Vec4& x,
                                        const ModelParams& p) {
  const double alpha = p.alpha;
  const double pivot2 = alpha * u.rho_s - 2.0 * u.u_s * u.u_s;
  const double t4 = x[3] + u.u_s / u.rho_s * x[1];
  const double t3 = x[2] + u.u_n / u.rho_n * x[0];
  const double t2 = x[1] + 2.0 * alpha * u.rho_s / pivot2 * x[0];
  const double last = p.c() / std::cbrt(u.rho_n) + 2.0 * alpha -
                      u.u_n * u.u_n / u.rho_n - 2.0 * alpha * alpha * u.rho_s / pivot2;
  return u.rho_s * t4 * t4 + u.rho_n * t3 * t3 +
         (0.5 * alpha - u.u_s * u.u_s / u.rho_s) * t2 * t2 + last * x[0] * x[0];
}

bool in_admissible_set(const PrimitiveState& u, const ModelParams& p) {
  if (!(u.rho_n > 0.0) || !(u.rho_s > 0.0)) return false;
  if (!check_conditions(u, p).any()) return false;
  if (!(u.u_s * u.u_s < 0.5 * p.alpha * u.rho_s)) return false;
  if (!(char_poly(u, p)(0.0) > 0.0)) return false;
  return u.u_n != u.u_s;
}

double shock_entropy_dissipation(const PrimitiveState& u_minus, const PrimitiveState& u_plus,
                                 double sigma, const ModelParams& p) {
  return sigma * (entropy_E(u_plus, p) - entropy_E(u_minus, p)) -
         (entropy_G(u_plus, p) - entropy_G(u_minus, p));
}

EntropyReport entropy_report(const PrimitiveState& u, const ModelParams& p, int n_probes,
                             unsigned seed) {
  EntropyReport rep;
  rep.E = entropy_E(u, p);
  rep.G = entropy_G(u, p);
  rep.us_small = u.u_s * u.u_s < 0.5 * p.alpha * u.rho_s;
  rep.pa0_positive = char_poly(u, p)(0.0) > 0.0;
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double min_q = std::numeric_limits<double>::infinity();
  const Mat4 h = entropy_hessian(u, p);
  for (int i = 0; i < n_probes; ++i) {
    Vec4 x;
    do {
      for (int k = 0; k < 4; ++k) x[k] = gauss(rng);
    } while (x.norm() < 1e-8);
    x.normalize();
    min_q = std::min(min_q, x.dot(h * x));
  }
  rep.min_quadratic_form = min_q;
  return rep;
}

}  // namespace bifluid
