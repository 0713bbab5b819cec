#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bifluid {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// x^{2/3} and x^{5/3} via cbrt (faster and better conditioned than pow).
inline double pow_2_3(double x) {
  const double c = std::cbrt(x);
  return c * c;
}
inline double pow_5_3(double x) { return x * pow_2_3(x); }

/// Constants of the isentropic two-fluid model. The pressure law is
/// p = c_tilde * rho_n^{5/3}; the quasilinear form uses c = (5/3) c_tilde.
/// Only c_tilde is stored so the two can never drift apart.
struct ModelParams {
  double alpha = 1.0;    // interaction strength, > 0
  double c_tilde = 1.0;  // isentropic constant, > 0

  double c() const { return (5.0 / 3.0) * c_tilde; }
};

/// Physical unknowns (rho_n, rho_s, u_n, u_s).
struct PrimitiveState {
  double rho_n = 0.0;
  double rho_s = 0.0;
  double u_n = 0.0;
  double u_s = 0.0;

  Vec4 vec() const { return Vec4(rho_n, rho_s, u_n, u_s); }
  static PrimitiveState from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

/// Conserved unknowns (rho_n, rho_s, total momentum, total energy).
struct ConservedState {
  double rho_n = 0.0;
  double rho_s = 0.0;
  double m = 0.0;
  double e = 0.0;

  Vec4 vec() const { return Vec4(rho_n, rho_s, m, e); }
  static ConservedState from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

/// Selects the root of the conversion quadratic: the conserved->primitive map
/// is two-to-one and the branch tag picks u_n > u_s or u_n < u_s.
enum class Branch { NormalFaster, SuperFaster };

inline Branch branch_of(const PrimitiveState& u) {
  return u.u_n >= u.u_s ? Branch::NormalFaster : Branch::SuperFaster;
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonpositiveDensity : Error {
  using Error::Error;
};
struct NegativeDiscriminant : Error {
  using Error::Error;
};
struct QuadratureNotConverged : Error {
  using Error::Error;
};
struct NotAnEigenvalue : Error {
  using Error::Error;
};
struct DegenerateRoot : Error {
  using Error::Error;
};
struct SeedJacobianSingular : Error {
  using Error::Error;
};
struct CflViolation : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

/// Raised when the solver cannot recover a primitive state in some cell;
/// carries the cell index and simulation time for diagnostics.
struct ConversionFailure : Error {
  ConversionFailure(const std::string& what, int cell_, double time_)
      : Error(what), cell(cell_), time(time_) {}
  int cell;
  double time;
};

}  // namespace bifluid
