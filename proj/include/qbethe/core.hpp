/// @file core.hpp
/// Parameter records, tolerances and the Laurent helpers shared by every module.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qbethe {

using cplx = std::complex<double>;

struct Tolerances {
  double identity_tol = 1e-9;
  double solver_tol = 1e-12;
  double singularity_floor = 1e-6;

  void validate() const;
};

/// Caps applied before anything dense is built.
struct SectorLimits {
  int max_n = 6;
  int max_m = 8;
  std::size_t max_dense = 5000;
};

/// Lattice couplings. Sites are 0..m; t is always q*q.
struct ModelParams {
  int m = 3;
  int n = 2;
  double q = 0.6;
  double t = 0.36;
  double a_plus = 0.3;
  double a_minus = -0.4;

  static ModelParams make(int m, int n, double q, double a_plus, double a_minus);
  /// q=0.6, a+=0.3, a-=-0.4
  static ModelParams defaults(int m, int n);
  void validate() const;
};

struct ContinuumParams {
  int n = 1;
  double g = 1.0;
  double g_plus = 1.0;
  double g_minus = 1.0;

  static ContinuumParams make(int n, double g, double g_plus, double g_minus);
  void validate() const;
};

cplx laurent_s(cplx u);                      // u - 1/u
cplx laurent_c(cplx u);                      // u + 1/u
cplx laurent_e(cplx u, double a);            // a u - 1/u
cplx laurent_f(cplx u, double a, double q);  // e(1/(q u); a)

/// Integer power by repeated squaring (std::pow on complex goes through log/exp).
cplx ipow(cplx base, int exponent);
double ipow(double base, int exponent);

/// [k] = (1 - t^k)/(1 - t)
double q_integer(int k, double t);
/// [k]! with [0]! = 1
double q_factorial(int k, double t);

/// max|a-b| / max(max|a|, max|b|); zero when both vanish.
double relative_deviation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
double max_abs(const Eigen::MatrixXcd& a);

/// Throws std::domain_error naming `what` when |value| < floor.
void guard_denominator(cplx value, double floor, const std::string& what);

}  // namespace qbethe
