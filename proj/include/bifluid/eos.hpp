#pragma once

#include <cmath>
#include <utility>

#include "bifluid/types.hpp"

namespace bifluid::eos {

/// Li_s(beta) = sum_{k>=1} beta^k / k^s for beta in [0,1), s >= 0.
/// Closed forms for s = 0 and s = 1; direct summation otherwise, truncated
/// when the next term drops below tol * partial sum. Past 10^6 terms the
/// geometric tail estimate term * beta/(1-beta) is folded in.
double polylog(double s, double beta, double tol = 1e-14);

/// F0(beta) = (2 pi)^{N/2} Li_{N/2}(beta): the centered number-density
/// integral of the bosonian at unit temperature.
double F0(double beta, int N = 3, double tol = 1e-14);

/// F2(beta) = N (2 pi)^{N/2} Li_{N/2+1}(beta): the |v|^2 moment.
double F2(double beta, int N = 3, double tol = 1e-14);

/// Entropy per unit normal-fluid mass as a function of the fugacity:
/// S(beta) = (1/2 + 1/N) F2/F0 - log beta.
double entropy_S(double beta, int N = 3, double tol = 1e-14);

/// dS/dbeta, strictly negative on (0,1).
double entropy_S_prime(double beta, int N = 3, double tol = 1e-14);

/// Isentropic constant c_tilde_N = (1/N) F2(beta0) / F0(beta0)^{1+2/N},
/// giving the pressure law p = c_tilde_N rho_n^{(N+2)/N}.
double c_tilde_from_beta0(double beta0, int N = 3, double tol = 1e-14);

/// Convolution coefficients from the entropy-monotonicity series:
/// c_n = sum_k 1/((k+1)^{N/2} (n-k+1)^{N/2}) and the tilde variant with
/// exponents N/2+1 and N/2-1. c_tilde_n >= c_n for all n.
double convolution_coeff(int n, int N);
double convolution_coeff_tilde(int n, int N);

/// Moment of order 0 or 2 of the centered bosonian at temperature T,
/// computed by adaptive radial quadrature:
///   integral over R^N of |v|^order * beta e^{-|v|^2/2T} / (1 - beta e^{-|v|^2/2T}).
/// Order 0 equals T^{N/2} F0(beta); order 2 equals T^{N/2+1} F2(beta).
double bosonian_moment(int order, double beta, double T, int N = 3, double abs_tol = 1e-10);

struct EosTable {
  int dimension;
  double beta0;
  double c_tilde_N;
  double series_tol;
};

EosTable make_eos_table(double beta0, int N = 3, double series_tol = 1e-14);

/// Adaptive Simpson quadrature on [a,b] to absolute tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
  struct Rec {
    const std::remove_reference_t<F>& g;
    int max_depth;
    double run(double lo, double mid, double hi, double flo, double fmid, double fhi,
               double whole, double tol, int depth) const {
      const double lm = 0.5 * (lo + mid);
      const double rm = 0.5 * (mid + hi);
      const double flm = g(lm);
      const double frm = g(rm);
      const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
      const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
      const double delta = left + right - whole;
      if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      if (depth >= max_depth)
        throw QuadratureNotConverged("adaptive_simpson: depth limit reached");
      return run(lo, lm, mid, flo, flm, fmid, left, 0.5 * tol, depth + 1) +
             run(mid, rm, hi, fmid, frm, fhi, right, 0.5 * tol, depth + 1);
    }
  };
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec{f, max_depth}.run(a, m, b, fa, fm, fb, whole, abs_tol, 0);
}

/// Integral over R^N of an isotropic function r -> f(|v|): surface factor
/// times the 1-D radial integral on [0, r_max].
template <class F>
double integrate_radial(F&& f, int N, double r_max, double abs_tol) {
  const double surface = 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
  auto g = [&](double r) { return std::pow(r, N - 1) * f(r); };
  return surface * adaptive_simpson(g, 0.0, r_max, abs_tol / std::max(1.0, surface));
}

}  // namespace bifluid::eos
