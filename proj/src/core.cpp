#include "qbethe/core.hpp"

#include <cmath>

namespace qbethe {

void Tolerances::validate() const {
  if (!(identity_tol > 0.0) || !(solver_tol > 0.0) || !(singularity_floor > 0.0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
}

ModelParams ModelParams::make(int m, int n, double q, double a_plus, double a_minus) {
  ModelParams p;
  p.m = m;
  p.n = n;
  p.q = q;
  p.t = q * q;
  p.a_plus = a_plus;
  p.a_minus = a_minus;
  p.validate();
  return p;
}

ModelParams ModelParams::defaults(int m, int n) { return make(m, n, 0.6, 0.3, -0.4); }

void ModelParams::validate() const {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in (0,1)");
  if (t != q * q) throw std::invalid_argument("t must equal q*q");
  if (!(a_plus > -1.0 && a_plus < 1.0)) throw std::invalid_argument("a_plus must lie in (-1,1)");
  if (!(a_minus > -1.0 && a_minus < 1.0)) throw std::invalid_argument("a_minus must lie in (-1,1)");
}

ContinuumParams ContinuumParams::make(int n, double g, double g_plus, double g_minus) {
  ContinuumParams cp{n, g, g_plus, g_minus};
  cp.validate();
  return cp;
}

void ContinuumParams::validate() const {
  if (n < 1) throw std::invalid_argument("continuum n must be >= 1");
  if (!(g > 0.0) || !(g_plus > 0.0) || !(g_minus > 0.0)) {
    throw std::invalid_argument("g, g_plus, g_minus must be strictly positive");
  }
}

cplx laurent_s(cplx u) {
  if (u == cplx(0.0)) throw std::domain_error("laurent_s: zero argument");
  return u - 1.0 / u;
}

cplx laurent_c(cplx u) {
  if (u == cplx(0.0)) throw std::domain_error("laurent_c: zero argument");
  return u + 1.0 / u;
}

cplx laurent_e(cplx u, double a) {
  if (u == cplx(0.0)) throw std::domain_error("laurent_e: zero argument");
  return a * u - 1.0 / u;
}

cplx laurent_f(cplx u, double a, double q) {
  if (u == cplx(0.0)) throw std::domain_error("laurent_f: zero argument");
  return laurent_e(1.0 / (q * u), a);
}

template <class T>
static T ipow_impl(T base, int exponent) {
  if (exponent < 0) {
    base = T(1.0) / base;
    exponent = -exponent;
  }
  T acc(1.0);
  while (exponent > 0) {
    if (exponent & 1) acc *= base;
    base *= base;
    exponent >>= 1;
  }
  return acc;
}

cplx ipow(cplx base, int exponent) { return ipow_impl(base, exponent); }
double ipow(double base, int exponent) { return ipow_impl(base, exponent); }

double q_integer(int k, double t) {
  // sum form avoids the 0/0 at t=1 and is exact for small k
  double acc = 0.0;
  double power = 1.0;
  for (int j = 0; j < k; ++j) {
    acc += power;
    power *= t;
  }
  return acc;
}

double q_factorial(int k, double t) {
  double acc = 1.0;
  for (int j = 1; j <= k; ++j) acc *= q_integer(j, t);
  return acc;
}

double max_abs(const Eigen::MatrixXcd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double relative_deviation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("relative_deviation: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  const double scale = std::max(max_abs(a), max_abs(b));
  if (scale == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

void guard_denominator(cplx value, double floor, const std::string& what) {
  if (std::abs(value) < floor) {
    throw std::domain_error("near-singular denominator: " + what);
  }
}

}  // namespace qbethe
