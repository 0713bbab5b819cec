#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bifluid/hyperbolicity.hpp"
#include "test_oracles.hpp"

using namespace bifluid;

namespace {

// Biquadratic reference case: rho_n = rho_s = 1, u_n = u_s = 0, alpha = 1 and
// c = 1, so P(x) = (x^2 - 3)(x^2 - 1/2) - 1 = x^4 - 7/2 x^2 + 1/2. Solving the
// quadratic in x^2 gives x^2 = (7 +- sqrt(41))/4.
const ModelParams biquad_params{1.0, 0.6};  // c = 1
const PrimitiveState biquad_state{1.0, 1.0, 0.0, 0.0};

std::array<double, 4> biquadratic_roots() {
  const double hi = std::sqrt((7.0 + std::sqrt(41.0)) / 4.0);
  const double lo = std::sqrt((7.0 - std::sqrt(41.0)) / 4.0);
  return {-hi, -lo, lo, hi};
}

PrimitiveState sample_conditioned(oracles::StateSampler& sampler, const ModelParams& p) {
  for (;;) {
    const PrimitiveState u = sampler.state(0.05, 3.0, 2.5);
    if (check_conditions(u, p).any()) return u;
  }
}

// States with a certified, well-separated spectrum; used by the tests that
// differentiate eigenvalues (finite differences need simple roots with room
// around them).
PrimitiveState sample_separated(oracles::StateSampler& sampler, const ModelParams& p) {
  for (;;) {
    const PrimitiveState u = sample_conditioned(sampler, p);
    const Spectrum spec = eigenvalues(u, p);
    if (!spec.certified) continue;
    bool ok = true;
    for (int k = 0; k < 3; ++k)
      if (spec.lambdas[k + 1] - spec.lambdas[k] < 1e-2) ok = false;
    if (ok) return u;
  }
}

std::array<double, 4> oracle_roots(const PrimitiveState& u, const ModelParams& p) {
  return oracles::companion_quartic_roots(
      u.u_n, u.u_s, p.c() * pow_2_3(u.rho_n) + 2.0 * p.alpha * u.rho_n,
      0.5 * p.alpha * u.rho_s, p.alpha * p.alpha * u.rho_n * u.rho_s);
}

}  // namespace

TEST_CASE("char_poly closed-form values") {
  oracles::StateSampler sampler(42);
  const ModelParams p{0.9, 1.2};
  for (int i = 0; i < 500; ++i) {
    const PrimitiveState u = sampler.state();
    const CharPoly poly = char_poly(u, p);
    const double sq_as = std::sqrt(poly.a_s);
    CHECK(poly(u.u_s - sq_as) == doctest::Approx(-poly.coupling).epsilon(1e-12));
    CHECK(poly(u.u_s + sq_as) == doctest::Approx(-poly.coupling).epsilon(1e-12));
    const double du2 = (u.u_n - u.u_s) * (u.u_n - u.u_s);
    const double cr = p.c() * pow_2_3(u.rho_n);
    CHECK(poly(u.u_s) ==
          doctest::Approx(-0.5 * p.alpha * u.rho_s * (du2 - cr)).epsilon(1e-11));
    CHECK(poly(u.u_n) ==
          doctest::Approx(0.5 * p.alpha * u.rho_s * cr - du2 * poly.a_n).epsilon(1e-11));
  }
}

TEST_CASE("hyperbolicity conditions") {
  const ModelParams p{1.0, 0.6};  // c = 1
  CHECK(check_conditions({1.0, 1.0, 0.3, 0.3}, p).cond1);       // 0 < c rho^{2/3}
  CHECK(check_conditions({0.125, 1.0, 0.0, 0.0}, p).cond3);     // boundary 1/8 <= 1/8
  CHECK_FALSE(check_conditions({8.0, 1.0, 0.0, 0.0}, p).cond3); // 8 > 1/8
}

TEST_CASE("biquadratic spectrum") {
  const Spectrum spec = eigenvalues(biquad_state, biquad_params);
  const auto expected = biquadratic_roots();
  REQUIRE(spec.certified);
  for (int i = 0; i < 4; ++i)
    CHECK(spec.lambdas[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("cond1 or cond2 certifies four interlaced roots") {
  oracles::StateSampler sampler(20240811);
  const ModelParams p{0.8, 1.0};
  int n_cond1 = 0, n_cond2 = 0;
  int i = 0;
  while (i < 3000) {
    const PrimitiveState u = sample_conditioned(sampler, p);
    const auto conds = check_conditions(u, p);
    if (!conds.cond1 && !conds.cond2) continue;
    ++i;
    const Spectrum spec = eigenvalues(u, p);
    REQUIRE(spec.certified);
    const double spread = spec.lambdas[3] - spec.lambdas[0];
    for (int k = 0; k < 3; ++k)
      CHECK(spec.lambdas[k + 1] - spec.lambdas[k] > 1e-10 * spread);

    const CharPoly poly = char_poly(u, p);
    if (conds.cond1) {
      ++n_cond1;
      const double sq_as = std::sqrt(poly.a_s);
      CHECK(spec.lambdas[0] < u.u_s - sq_as + 1e-10);
      CHECK(u.u_s - sq_as < spec.lambdas[1] + 1e-10);
      CHECK(spec.lambdas[1] < u.u_s + 1e-10);
      CHECK(u.u_s < spec.lambdas[2] + 1e-10);
      CHECK(spec.lambdas[2] < u.u_s + sq_as + 1e-10);
      CHECK(u.u_s + sq_as < spec.lambdas[3] + 1e-10);
    }
    if (conds.cond2) {
      ++n_cond2;
      const double sq_an = std::sqrt(poly.a_n);
      CHECK(spec.lambdas[0] < u.u_n - sq_an + 1e-10);
      CHECK(u.u_n - sq_an < spec.lambdas[1] + 1e-10);
      CHECK(spec.lambdas[1] < u.u_n + 1e-10);
      CHECK(u.u_n < spec.lambdas[2] + 1e-10);
      CHECK(spec.lambdas[2] < u.u_n + sq_an + 1e-10);
      CHECK(u.u_n + sq_an < spec.lambdas[3] + 1e-10);
    }

    // Vieta: sum = 2(u_n + u_s), product = P(0)
    const double sum = spec.lambdas[0] + spec.lambdas[1] + spec.lambdas[2] + spec.lambdas[3];
    const double prod =
        spec.lambdas[0] * spec.lambdas[1] * spec.lambdas[2] * spec.lambdas[3];
    CHECK(sum ==
          doctest::Approx(2.0 * (u.u_n + u.u_s)).epsilon(1e-9).scale(1.0 + spread));
    CHECK(prod == doctest::Approx(poly(0.0)).epsilon(1e-9).scale(1.0 + std::abs(poly(0.0))));
  }
  CHECK(n_cond1 > 100);
  CHECK(n_cond2 > 10);
}

TEST_CASE("cond3 with a positive midpoint probe certifies a straddling pair") {
  oracles::StateSampler sampler(909);
  const ModelParams p{0.8, 1.0};
  int straddled = 0;
  int attempts = 0;
  while (straddled < 300 && attempts < 200000) {
    ++attempts;
    const PrimitiveState u = sampler.state(0.05, 3.0, 2.5);
    const auto conds = check_conditions(u, p);
    if (!conds.cond3 || conds.cond1 || conds.cond2 || u.u_n == u.u_s) continue;
    const CharPoly poly = char_poly(u, p);
    const double mid = 0.5 * (u.u_n + u.u_s);
    if (!(poly(mid) > 0.0)) continue;
    const Spectrum spec = eigenvalues(u, p);
    REQUIRE(spec.certified);
    CHECK(spec.lambdas[1] < mid);
    CHECK(mid < spec.lambdas[2]);
    ++straddled;
  }
  CHECK(straddled == 300);
}

TEST_CASE("cond3 alone does not exclude a complex pair") {
  // Regression for the boundary of the certified region: this state satisfies
  // cond3 only, and its quartic has exactly two real roots (interior maximum
  // of P between them is negative), so no certificate exists.
  const ModelParams p{0.8, 1.0};
  const PrimitiveState u{0.75403424206403113, 0.11180422037074257, 1.5405260658194493,
                         0.19711395483969074};
  const auto conds = check_conditions(u, p);
  CHECK(conds.cond3);
  CHECK_FALSE(conds.cond1);
  CHECK_FALSE(conds.cond2);
  const Spectrum spec = eigenvalues(u, p);
  CHECK_FALSE(spec.certified);
  // companion oracle: the middle pair is complex, its real parts are not roots
  const CharPoly poly = char_poly(u, p);
  const auto roots = oracle_roots(u, p);
  CHECK(std::abs(poly(roots[0])) < 1e-10);
  CHECK(std::abs(poly(roots[3])) < 1e-10);
  CHECK(std::abs(poly(roots[1])) > 1e-3);
}

TEST_CASE("cond3 certification survives small rho_s") {
  // Here the midpoint probe lies far outside (u_s - sqrt(a_s), u_s + sqrt(a_s));
  // the u_n-side probes are what isolate the outer roots.
  const ModelParams p{0.2, 1.0};
  const PrimitiveState u{1.0, 0.01, 10.0, 0.0};
  const auto conds = check_conditions(u, p);
  CHECK(conds.cond3);
  CHECK_FALSE(conds.cond1);
  CHECK_FALSE(conds.cond2);
  const Spectrum spec = eigenvalues(u, p);
  CHECK(spec.certified);
  const auto oracle = oracle_roots(u, p);
  for (int i = 0; i < 4; ++i)
    CHECK(spec.lambdas[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
}

TEST_CASE("certified spectra agree with the companion-matrix oracle") {
  oracles::StateSampler sampler(5150);
  const ModelParams p{1.1, 0.9};
  int certified_count = 0;
  for (int i = 0; i < 2000; ++i) {
    const PrimitiveState u = sample_conditioned(sampler, p);
    const Spectrum spec = eigenvalues(u, p);
    if (!spec.certified) continue;  // non-hyperbolic cond3 band
    ++certified_count;
    const auto oracle = oracle_roots(u, p);
    for (int k = 0; k < 4; ++k)
      CHECK(spec.lambdas[k] ==
            doctest::Approx(oracle[k]).epsilon(1e-9).scale(1.0 + std::abs(oracle[k])));
  }
  CHECK(certified_count > 1800);
}

TEST_CASE("eigenvectors satisfy A X = lambda X") {
  const Mat4 a = quasilinear_matrix(biquad_state, biquad_params);
  const Spectrum spec = eigenvalues(biquad_state, biquad_params);
  for (int k = 0; k < 4; ++k) {
    const Vec4 x = eigenvector(spec.lambdas[k], biquad_state, biquad_params);
    CHECK(x.cwiseAbs().maxCoeff() == doctest::Approx(1.0));  // normalization
    const double residual = (a * x - spec.lambdas[k] * x).norm();
    CHECK(residual <= 1e-8 * a.norm() * x.norm());
  }

  oracles::StateSampler sampler(31);
  const ModelParams p{0.5, 1.5};
  for (int i = 0; i < 300; ++i) {
    const PrimitiveState u = sample_separated(sampler, p);
    const Mat4 mat = quasilinear_matrix(u, p);
    const Spectrum spec_u = eigenvalues(u, p);
    for (int k = 0; k < 4; ++k) {
      const Vec4 x = eigenvector(spec_u.lambdas[k], u, p);
      CHECK((mat * x - spec_u.lambdas[k] * x).norm() <= 1e-8 * mat.norm() * x.norm());
    }
  }
}

TEST_CASE("eigenvector rejects non-eigenvalues") {
  const CharPoly poly = char_poly(biquad_state, biquad_params);
  const double lambda_star = biquad_state.u_s - std::sqrt(poly.a_s);
  CHECK_THROWS_AS(eigenvector(lambda_star, biquad_state, biquad_params), NotAnEigenvalue);
  CHECK_THROWS_AS(eigenvector(100.0, biquad_state, biquad_params), NotAnEigenvalue);
}

TEST_CASE("eigenvalue gradient matches finite differences of the spectrum") {
  oracles::StateSampler sampler(88);
  const ModelParams p{0.9, 1.0};
  for (int i = 0; i < 100; ++i) {
    const PrimitiveState u = sample_separated(sampler, p);
    const Spectrum spec = eigenvalues(u, p);
    for (int k = 0; k < 4; ++k) {
      auto lambda_k = [&](const Vec4& v) {
        return eigenvalues(PrimitiveState::from_vec(v), p).lambdas[k];
      };
      const Vec4 fd = oracles::fd_gradient(lambda_k, u.vec(), 1e-6);
      const Vec4 grad = eigenvalue_gradient(spec.lambdas[k], u, p);
      CHECK((fd - grad).norm() <= 1e-5 * (1.0 + grad.norm()));
    }
  }
}

TEST_CASE("genuine nonlinearity of the extremal fields") {
  const Spectrum spec = eigenvalues(biquad_state, biquad_params);
  // extremal root clears the condition: lambda_4^2 = (7 + sqrt(41))/4 > 3 = a_n
  const double lambda4 = spec.lambdas[3];
  CHECK(lambda4 * lambda4 > char_poly(biquad_state, biquad_params).a_n);

  oracles::StateSampler sampler(2718);
  const ModelParams p{1.0, 1.0};
  for (int i = 0; i < 500; ++i) {
    const PrimitiveState u = sample_separated(sampler, p);
    const Spectrum s = eigenvalues(u, p);
    const CharPoly poly = char_poly(u, p);
    for (int k : {0, 3}) {
      const double dn = s.lambdas[k] - u.u_n;
      CHECK(dn * dn > poly.a_n);  // extremal roots sit outside u_n -+ sqrt(a_n)
      const auto gnl = genuine_nonlinearity(s.lambdas[k], u, p);
      CHECK(gnl.certified_nonzero);
      CHECK(gnl.value != 0.0);
    }
  }
}

TEST_CASE("grad(lambda).X matches directional finite differences") {
  oracles::StateSampler sampler(1618);
  const ModelParams p{0.7, 1.2};
  for (int i = 0; i < 60; ++i) {
    const PrimitiveState u = sample_separated(sampler, p);
    const Spectrum spec = eigenvalues(u, p);
    for (int k = 0; k < 4; ++k) {
      // the indicator is stated for the unnormalized eigenvector
      const double lambda = spec.lambdas[k];
      const double fs = (lambda - u.u_s) * (lambda - u.u_s) - 0.5 * p.alpha * u.rho_s;
      const Vec4 x{fs, p.alpha * u.rho_s, (lambda - u.u_n) * fs / u.rho_n,
                   p.alpha * (lambda - u.u_s)};
      auto lambda_k = [&](const Vec4& v) {
        return eigenvalues(PrimitiveState::from_vec(v), p).lambdas[k];
      };
      const double h = 1e-7;
      const double fd =
          (lambda_k(u.vec() + h * x) - lambda_k(u.vec() - h * x)) / (2.0 * h);
      const auto gnl = genuine_nonlinearity(spec.lambdas[k], u, p);
      CHECK(gnl.value == doctest::Approx(fd).epsilon(1e-5).scale(1.0 + std::abs(fd)));
    }
  }
}

TEST_CASE("degenerate-root guard") {
  // P' vanishes at critical points of P; those are never simple roots.
  const CharPoly poly = char_poly(biquad_state, biquad_params);
  CHECK(std::abs(poly.derivative(0.0)) < 1e-14);
  CHECK_THROWS_AS(genuine_nonlinearity(0.0, biquad_state, biquad_params), DegenerateRoot);
  CHECK_THROWS_AS(eigenvalue_gradient(0.0, biquad_state, biquad_params), DegenerateRoot);
}
