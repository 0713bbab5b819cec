#include "bifluid/eos.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace bifluid::eos {

namespace {

constexpr std::int64_t kMaxTerms = 1'000'000;

// k^{-s} with cheap paths for the integer and half-integer exponents that
// dominate this module (N/2 +- 1 for N in {2,3,4}).
double inv_pow(double k, double s) {
  const double twos = 2.0 * s;
  if (twos == std::floor(twos) && twos >= 0.0 && twos <= 12.0) {
    const int half_steps = static_cast<int>(twos);
    double denom = 1.0;
    for (int i = 0; i < half_steps / 2; ++i) denom *= k;
    if (half_steps % 2 != 0) denom *= std::sqrt(k);
    return 1.0 / denom;
  }
  return std::pow(k, -s);
}

void check_beta(double beta, const char* who) {
  if (!(beta >= 0.0) || beta >= 1.0)
    throw Error(std::string(who) + ": beta must lie in [0,1), got " + std::to_string(beta));
}

double gauss_factor(int N) { return std::pow(2.0 * M_PI, 0.5 * N); }

}  // namespace

double polylog(double s, double beta, double tol) {
  check_beta(beta, "polylog");
  if (beta == 0.0) return 0.0;
  if (s == 0.0) return beta / (1.0 - beta);
  if (s == 1.0) return -std::log1p(-beta);

  double sum = 0.0;
  double pw = 1.0;
  double term = 0.0;
  for (std::int64_t k = 1; k <= kMaxTerms; ++k) {
    pw *= beta;
    term = pw * inv_pow(static_cast<double>(k), s);
    sum += term;
    if (term < tol * sum) return sum;
  }
  // Truncated: the tail is between 0 and term * beta/(1-beta); take the
  // midpoint so the bound halves the worst-case error.
  return sum + 0.5 * term * beta / (1.0 - beta);
}

double F0(double beta, int N, double tol) {
  return gauss_factor(N) * polylog(0.5 * N, beta, tol);
}

double F2(double beta, int N, double tol) {
  return N * gauss_factor(N) * polylog(0.5 * N + 1.0, beta, tol);
}

double entropy_S(double beta, int N, double tol) {
  return (0.5 + 1.0 / N) * F2(beta, N, tol) / F0(beta, N, tol) - std::log(beta);
}

double entropy_S_prime(double beta, int N, double tol) {
  const double f0 = F0(beta, N, tol);
  const double f2 = F2(beta, N, tol);
  // d/dbeta Li_s(beta) = Li_{s-1}(beta) / beta
  const double f0p = gauss_factor(N) * polylog(0.5 * N - 1.0, beta, tol) / beta;
  const double f2p = N * gauss_factor(N) * polylog(0.5 * N, beta, tol) / beta;
  return (0.5 + 1.0 / N) * (f2p * f0 - f2 * f0p) / (f0 * f0) - 1.0 / beta;
}

double c_tilde_from_beta0(double beta0, int N, double tol) {
  return F2(beta0, N, tol) / (N * std::pow(F0(beta0, N, tol), 1.0 + 2.0 / N));
}

double convolution_coeff(int n, int N) {
  double sum = 0.0;
  for (int k = 0; k <= n; ++k)
    sum += inv_pow(k + 1.0, 0.5 * N) * inv_pow(n - k + 1.0, 0.5 * N);
  return sum;
}

double convolution_coeff_tilde(int n, int N) {
  double sum = 0.0;
  for (int k = 0; k <= n; ++k)
    sum += inv_pow(k + 1.0, 0.5 * N + 1.0) * inv_pow(n - k + 1.0, 0.5 * N - 1.0);
  return sum;
}

double bosonian_moment(int order, double beta, double T, int N, double abs_tol) {
  check_beta(beta, "bosonian_moment");
  if (order != 0 && order != 2)
    throw Error("bosonian_moment: order must be 0 or 2");
  if (!(T > 0.0)) throw Error("bosonian_moment: T must be positive");
  if (beta == 0.0) return 0.0;

  auto integrand = [=](double r) {
    const double g = beta * std::exp(-r * r / (2.0 * T));
    return std::pow(r, order) * g / (1.0 - g);
  };
  // Extend the cutoff until the integrand tail is negligible.
  double r_max = std::sqrt(2.0 * T) * 8.0;
  while (std::pow(r_max, order + N - 1) * beta * std::exp(-r_max * r_max / (2.0 * T)) >
         1e-18) {
    r_max *= 1.25;
    if (r_max > 1e6) throw QuadratureNotConverged("bosonian_moment: cutoff runaway");
  }
  auto radial = [&](double r) { return integrand(r); };
  return integrate_radial(radial, N, r_max, abs_tol);
}

EosTable make_eos_table(double beta0, int N, double series_tol) {
  check_beta(beta0, "make_eos_table");
  return {N, beta0, c_tilde_from_beta0(beta0, N, series_tol), series_tol};
}

}  // namespace bifluid::eos
