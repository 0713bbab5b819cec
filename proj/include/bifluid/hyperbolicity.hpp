#pragma once

#include <array>

#include "bifluid/types.hpp"

namespace bifluid {

/// Characteristic polynomial of the quasilinear matrix in factored form:
/// P(lambda) = ((lambda-u_n)^2 - a_n) ((lambda-u_s)^2 - a_s) - coupling
/// with a_n = c rho_n^{2/3} + 2 alpha rho_n, a_s = (alpha/2) rho_s and
/// coupling = alpha^2 rho_n rho_s.
struct CharPoly {
  double u_n = 0.0;
  double u_s = 0.0;
  double a_n = 0.0;
  double a_s = 0.0;
  double coupling = 0.0;

  double operator()(double lambda) const {
    const double dn = lambda - u_n;
    const double ds = lambda - u_s;
    return (dn * dn - a_n) * (ds * ds - a_s) - coupling;
  }
  double derivative(double lambda) const {
    const double dn = lambda - u_n;
    const double ds = lambda - u_s;
    return 2.0 * dn * (ds * ds - a_s) + 2.0 * ds * (dn * dn - a_n);
  }
  /// Monic coefficients c[0] + c[1] x + c[2] x^2 + c[3] x^3 + x^4.
  std::array<double, 5> coefficients() const;
};

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct Spectrum {
  std::array<double, 4> lambdas{};  // ascending
  bool certified = false;           // true iff four sign-change brackets were found
  std::array<RootBracket, 4> brackets{};

  double max_abs() const {
    return std::max(std::abs(lambdas.front()), std::abs(lambdas.back()));
  }
};

struct HyperbolicityConditions {
  bool cond1 = false;  // (u_n-u_s)^2 < c rho_n^{2/3}
  bool cond2 = false;  // (u_n-u_s)^2 < c (alpha/2) rho_s rho_n^{2/3} / a_n
  bool cond3 = false;  // rho_n <= (c / 2 alpha)^3
  bool any() const { return cond1 || cond2 || cond3; }
};

CharPoly char_poly(const PrimitiveState& u, const ModelParams& p);

HyperbolicityConditions check_conditions(const PrimitiveState& u, const ModelParams& p);

/// Four real eigenvalues, isolated by the sign pattern of P at
/// {u_s -+ sqrt(a_s), u_n -+ sqrt(a_n), u_s, u_n, midpoint} plus two outer
/// surrogate points that bound all roots, then polished by bisection with
/// safeguarded Newton steps. Falls back to the companion matrix (with
/// certified=false) when fewer than four brackets appear.
Spectrum eigenvalues(const PrimitiveState& u, const ModelParams& p);

/// Companion-matrix roots of the quartic, sorted by real part.
std::array<double, 4> companion_roots(const CharPoly& poly);

/// The quasilinear matrix A of the primitive-variable system.
Mat4 quasilinear_matrix(const PrimitiveState& u, const ModelParams& p);

/// Certified upper bound on max |lambda| over the spectrum; cheap enough for
/// per-cell CFL use and exact in the decoupled limit.
double wave_speed_bound(const PrimitiveState& u, const ModelParams& p);

/// Right eigenvector for an eigenvalue lambda (largest entry normalized
/// to +1). Throws NotAnEigenvalue if lambda does not annihilate P.
Vec4 eigenvector(double lambda, const PrimitiveState& u, const ModelParams& p);

/// Gradient of the eigenvalue with respect to (rho_n, rho_s, u_n, u_s) via
/// implicit differentiation of P. Throws DegenerateRoot when P'(lambda)
/// vanishes to tolerance.
Vec4 eigenvalue_gradient(double lambda, const PrimitiveState& u, const ModelParams& p);

struct NonlinearityResult {
  double value = 0.0;            // grad lambda . X
  bool certified_nonzero = false;
};

/// Genuine-nonlinearity indicator grad_U lambda . X for the characteristic
/// field of lambda. certified_nonzero is set when (lambda-u_n)^2 > a_n
/// (always true for the extremal fields) or when the value clears a
/// scale-based threshold.
NonlinearityResult genuine_nonlinearity(double lambda, const PrimitiveState& u,
                                        const ModelParams& p);

}  // namespace bifluid
