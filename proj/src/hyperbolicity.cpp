#include "bifluid/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace bifluid {

namespace {

void require_positive_densities(const PrimitiveState& u, const char* who) {
  if (!(u.rho_n > 0.0) || !(u.rho_s > 0.0))
    throw NonpositiveDensity(std::string(who) + ": requires rho_n, rho_s > 0");
}

// Velocity-scale used for degenerate-root and certification thresholds.
double spread_scale(const CharPoly& poly) {
  return std::abs(poly.u_n) + std::abs(poly.u_s) + std::sqrt(poly.a_n) +
         std::sqrt(poly.a_s) + 1.0;
}

// Bisection on a sign-change bracket with Newton steps whenever they stay
// inside the bracket; tolerance 1e-12 * (1 + |lambda|).
double solve_bracketed(const CharPoly& poly, double lo, double hi) {
  double flo = poly(lo);
  double fhi = poly(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = poly(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= 1e-12 * (1.0 + std::abs(x))) return 0.5 * (lo + hi);
    const double dfx = poly.derivative(x);
    double next = 0.5 * (lo + hi);
    if (dfx != 0.0) {
      const double newton = x - fx / dfx;
      if (newton > lo && newton < hi) next = newton;
    }
    x = next;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::array<double, 5> CharPoly::coefficients() const {
  // (x^2 + pn x + qn)(x^2 + ps x + qs) - coupling
  const double pn = -2.0 * u_n;
  const double qn = u_n * u_n - a_n;
  const double ps = -2.0 * u_s;
  const double qs = u_s * u_s - a_s;
  return {qn * qs - coupling, pn * qs + ps * qn, qn + qs + pn * ps, pn + ps, 1.0};
}

CharPoly char_poly(const PrimitiveState& u, const ModelParams& p) {
  CharPoly poly;
  poly.u_n = u.u_n;
  poly.u_s = u.u_s;
  poly.a_n = p.c() * pow_2_3(u.rho_n) + 2.0 * p.alpha * u.rho_n;
  poly.a_s = 0.5 * p.alpha * u.rho_s;
  poly.coupling = p.alpha * p.alpha * u.rho_n * u.rho_s;
  return poly;
}

HyperbolicityConditions check_conditions(const PrimitiveState& u, const ModelParams& p) {
  require_positive_densities(u, "check_conditions");
  const double du2 = (u.u_n - u.u_s) * (u.u_n - u.u_s);
  const double c = p.c();
  const double cr = c * pow_2_3(u.rho_n);
  const double an = cr + 2.0 * p.alpha * u.rho_n;
  HyperbolicityConditions out;
  out.cond1 = du2 < cr;
  out.cond2 = du2 < cr * 0.5 * p.alpha * u.rho_s / an;
  const double bound = c / (2.0 * p.alpha);
  out.cond3 = u.rho_n <= bound * bound * bound;
  return out;
}

std::array<double, 4> companion_roots(const CharPoly& poly) {
  const auto c = poly.coefficients();
  Mat4 comp = Mat4::Zero();
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;
  comp(3, 2) = 1.0;
  comp(0, 3) = -c[0];
  comp(1, 3) = -c[1];
  comp(2, 3) = -c[2];
  comp(3, 3) = -c[3];
  Eigen::EigenSolver<Mat4> solver(comp);
  std::array<double, 4> roots;
  for (int i = 0; i < 4; ++i) roots[i] = solver.eigenvalues()[i].real();
  std::sort(roots.begin(), roots.end());
  return roots;
}

Spectrum eigenvalues(const PrimitiveState& u, const ModelParams& p) {
  require_positive_densities(u, "eigenvalues");
  const CharPoly poly = char_poly(u, p);
  const double sq_an = std::sqrt(poly.a_n);
  const double sq_as = std::sqrt(poly.a_s);
  const double mid = 0.5 * (poly.u_n + poly.u_s);
  const double radius = std::abs(poly.u_n - poly.u_s) + sq_an + sq_as +
                        std::pow(poly.coupling, 0.25) + 1.0;

  // All roots lie strictly between the surrogates, where P > 0.
  std::vector<double> probes = {mid - radius,      poly.u_s - sq_as, poly.u_s + sq_as,
                                poly.u_n - sq_an,  poly.u_n + sq_an, poly.u_s,
                                poly.u_n,          mid,              mid + radius};
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

  std::vector<double> exact_roots;
  std::vector<RootBracket> found;
  double prev_x = probes.front();
  double prev_f = poly(prev_x);
  for (std::size_t i = 1; i < probes.size(); ++i) {
    double x = probes[i];
    double f = poly(x);
    if (f == 0.0) {
      // A probe landed on a root: record it and restart the scan just past it.
      exact_roots.push_back(x);
      const double step = 1e-9 * (1.0 + std::abs(x));
      prev_x = x + step;
      prev_f = poly(prev_x);
      continue;
    }
    if ((f > 0.0) != (prev_f > 0.0)) found.push_back({prev_x, x});
    prev_x = x;
    prev_f = f;
  }

  Spectrum spec;
  if (found.size() + exact_roots.size() == 4) {
    std::vector<std::pair<double, RootBracket>> roots;
    for (const auto& b : found) roots.push_back({solve_bracketed(poly, b.lo, b.hi), b});
    for (double r : exact_roots) roots.push_back({r, {r, r}});
    std::sort(roots.begin(), roots.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (int i = 0; i < 4; ++i) {
      spec.lambdas[i] = roots[i].first;
      spec.brackets[i] = roots[i].second;
    }
    spec.certified = true;
    return spec;
  }

  const auto fallback = companion_roots(poly);
  spec.lambdas = fallback;
  spec.certified = false;
  for (int i = 0; i < 4; ++i) spec.brackets[i] = {fallback[i], fallback[i]};
  return spec;
}

Mat4 quasilinear_matrix(const PrimitiveState& u, const ModelParams& p) {
  Mat4 a = Mat4::Zero();
  a(0, 0) = u.u_n;
  a(0, 2) = u.rho_n;
  a(1, 1) = u.u_s;
  a(1, 3) = u.rho_s;
  a(2, 0) = p.c() / std::cbrt(u.rho_n) + 2.0 * p.alpha;
  a(2, 1) = p.alpha;
  a(2, 2) = u.u_n;
  a(3, 0) = p.alpha;
  a(3, 1) = 0.5 * p.alpha;
  a(3, 3) = u.u_s;
  return a;
}

double wave_speed_bound(const PrimitiveState& u, const ModelParams& p) {
  const CharPoly poly = char_poly(u, p);
  const double margin = std::pow(poly.coupling, 0.25);
  const double hi = std::max(poly.u_n + std::sqrt(poly.a_n), poly.u_s + std::sqrt(poly.a_s));
  const double lo = std::min(poly.u_n - std::sqrt(poly.a_n), poly.u_s - std::sqrt(poly.a_s));
  return std::max(std::abs(hi + margin), std::abs(lo - margin));
}

Vec4 eigenvector(double lambda, const PrimitiveState& u, const ModelParams& p) {
  require_positive_densities(u, "eigenvector");
  const CharPoly poly = char_poly(u, p);
  const double s = spread_scale(poly);
  const double poly_scale = s * s * s * s;
  if (std::abs(poly(lambda)) > 1e-8 * poly_scale)
    throw NotAnEigenvalue("eigenvector: P(lambda) = " + std::to_string(poly(lambda)));
  const double ds = lambda - poly.u_s;
  const double dn = lambda - poly.u_n;
  const double ds2 = ds * ds - poly.a_s;
  if (ds2 == 0.0 && poly.coupling > 0.0)
    throw NotAnEigenvalue("eigenvector: (lambda-u_s)^2 = a_s is never a root when the "
                          "fluids are coupled");
  Vec4 x;
  x[0] = ds2;
  x[1] = p.alpha * u.rho_s;
  x[2] = dn * ds2 / u.rho_n;
  x[3] = p.alpha * ds;
  int imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  return x / x[imax];
}

Vec4 eigenvalue_gradient(double lambda, const PrimitiveState& u, const ModelParams& p) {
  require_positive_densities(u, "eigenvalue_gradient");
  const CharPoly poly = char_poly(u, p);
  const double s = spread_scale(poly);
  const double dpoly = poly.derivative(lambda);
  if (std::abs(dpoly) < 1e-12 * s * s * s)
    throw DegenerateRoot("eigenvalue_gradient: P'(lambda) vanishes");
  const double two_k = -dpoly;  // 2K
  const double dn = lambda - poly.u_n;
  const double ds = lambda - poly.u_s;
  const double fn = dn * dn - poly.a_n;
  const double fs = ds * ds - poly.a_s;
  const double alpha = p.alpha;
  const double an_rho = (2.0 / 3.0) * p.c() / std::cbrt(u.rho_n) + 2.0 * alpha;
  Vec4 g;
  g[0] = (-an_rho * fs - alpha * alpha * u.rho_s) / two_k;
  g[1] = (-0.5 * alpha * fn - alpha * alpha * u.rho_n) / two_k;
  g[2] = -2.0 * dn * fs / two_k;
  g[3] = -2.0 * ds * fn / two_k;
  return g;
}

NonlinearityResult genuine_nonlinearity(double lambda, const PrimitiveState& u,
                                        const ModelParams& p) {
  require_positive_densities(u, "genuine_nonlinearity");
  const CharPoly poly = char_poly(u, p);
  const double s = spread_scale(poly);
  const double dpoly = poly.derivative(lambda);
  if (std::abs(dpoly) < 1e-12 * s * s * s)
    throw DegenerateRoot("genuine_nonlinearity: P'(lambda) vanishes");
  const double two_k = -dpoly;
  const double dn = lambda - poly.u_n;
  const double ds = lambda - poly.u_s;
  const double fn = dn * dn - poly.a_n;
  const double fs = ds * ds - poly.a_s;
  const double alpha = p.alpha;
  const double an_rho = (2.0 / 3.0) * p.c() / std::cbrt(u.rho_n) + 2.0 * alpha;
  // grad lambda . X; every bracket term carries the same sign when fn > 0
  // (then fs = coupling / fn > 0 at a root), which certifies the extremal
  // fields.
  const double bracket = an_rho * fs * fs + alpha * alpha * u.rho_s * fs +
                         0.5 * alpha * alpha * u.rho_s * fn +
                         alpha * alpha * alpha * u.rho_n * u.rho_s +
                         2.0 * dn * dn * fs * fs / u.rho_n +
                         2.0 * alpha * ds * ds * fn;
  NonlinearityResult out;
  out.value = -bracket / two_k;
  out.certified_nonzero = (fn > 0.0) || (std::abs(out.value) > 1e-8 * s);
  return out;
}

}  // namespace bifluid
