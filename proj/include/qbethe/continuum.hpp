/// @file continuum.hpp
/// The continuum Bethe wave function on the alcove 1/2 > x_1 > ... > x_n > 0,
/// its Robin boundary residuals, exact integration of plane-wave sums over the
/// alcove, and the staircase embedding used to follow the lattice model to the
/// continuum as the number of sites grows.
#pragma once

#include <span>
#include <vector>

#include "qbethe/bethe.hpp"
#include "qbethe/fock.hpp"

namespace qbethe {

struct ExponentialTerm {
  cplx coeff;
  std::vector<double> freq;
};

/// sum_terms coeff * exp(i <freq, x>)
class ExponentialSum {
 public:
  ExponentialSum() = default;
  explicit ExponentialSum(int dim) : dim_(dim) {}

  void add(cplx coeff, std::vector<double> freq);
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const std::vector<ExponentialTerm>& terms() const { return terms_; }

  [[nodiscard]] cplx evaluate(std::span<const double> x) const;
  /// d/dx_j of the sum, evaluated at x.
  [[nodiscard]] cplx derivative(int j, std::span<const double> x) const;
  [[nodiscard]] ExponentialSum conjugate() const;
  [[nodiscard]] double coefficient_norm() const;

  friend ExponentialSum operator*(const ExponentialSum& a, const ExponentialSum& b);
  friend ExponentialSum operator+(const ExponentialSum& a, const ExponentialSum& b);

 private:
  int dim_ = 0;
  std::vector<ExponentialTerm> terms_;
};

/// Plane-wave expansion of the wave function; 2^n n! terms.
ExponentialSum continuum_wave_sum(std::span<const double> xi, const ContinuumParams& cp,
                                  double singularity_floor = 1e-6);
cplx continuum_wave(std::span<const double> xi, std::span<const double> x, const ContinuumParams& cp,
                    double singularity_floor = 1e-6);

/// True when 1/2 > x_1 > ... > x_n > 0.
bool in_alcove(std::span<const double> x);

enum class WallKind { pair, origin, affine };

struct Wall {
  WallKind kind = WallKind::origin;
  int index = 0;  // for `pair`: the wall x_index = x_{index+1}, zero-based
};

/// All n+1 walls of the alcove.
std::vector<Wall> alcove_walls(int n);

/// |Robin operator applied to psi| at the point obtained by moving `sample` onto
/// the wall (x_{j+1} := x_j, x_n := 0 or x_1 := 1/2 respectively).
double robin_residual(std::span<const double> xi, const ContinuumParams& cp, Wall wall, std::span<const double> sample);

/// max |psi| over a uniform grid of the closed alcove (scale for residuals).
double wave_sup_norm(std::span<const double> xi, const ContinuumParams& cp, int points_per_axis = 41);

/// Exact integral over the alcove, n <= 5.
cplx alcove_integral(const ExponentialSum& es);

/// Gram matrix of the continuum wave functions at the spectral points of `lambdas`.
Eigen::MatrixXcd gram_continuum(std::span<const Partition> lambdas, const ContinuumParams& cp);
/// Same, by tensor Gauss-Legendre quadrature on the triangle (n = 2 only).
Eigen::MatrixXcd gram_continuum_quadrature(std::span<const Partition> lambdas, const ContinuumParams& cp);

// ---- staircase embedding and the large-m limit ---------------------------

/// Lattice point of x from floors of consecutive differences (x_{n+1} = 0).
Partition floor_map(std::span<const double> x);

/// sqrt(delta(l)) f(l) at l = floor_map(2 m x), zero off Lambda_{n,m}.
cplx staircase_embed(const FockVector& f, double t, std::span<const double> x);
/// 2^n sqrt(delta) P at the floored point: the staircase wave function.
cplx staircase_wave(std::span<const double> lattice_xi, const ModelParams& p, std::span<const double> x);
/// Integral of J f conj(J g) over the chamber, summed cell by cell.
cplx staircase_inner_product(const FockVector& f, const FockVector& g, double t);

/// Lattice couplings tending to the continuum model as m grows (q = sqrt(t)).
ModelParams continuum_limit_params(const ContinuumParams& cp, int m);

struct SweepRow {
  int m = 0;
  std::vector<double> scaled_xi;  // 2 m xi^{(n,m)}
  double xi_deviation = 0.0;      // sup-norm distance to the continuum point
  double staircase_norm = 0.0;    // integral of |staircase wave|^2
  cplx staircase_value;           // staircase wave at the sample point
  int iterations = 0;
};

struct SweepReport {
  Partition lambda;
  ContinuumParams params;
  std::vector<double> continuum_xi;
  double continuum_norm = 0.0;  // integral of |psi|^2 over the alcove
  std::vector<double> sample;
  cplx continuum_value;
  std::vector<SweepRow> rows;  // ordered as the requested m list
};

/// Default sample x_j = 0.3 (n - j) / n, zero-based j.
std::vector<double> default_sample(int n);

SweepReport convergence_sweep(const Partition& lambda, const ContinuumParams& cp, std::span<const int> m_list,
                              std::span<const double> sample = {});
SweepReport convergence_sweep_serial(const Partition& lambda, const ContinuumParams& cp, std::span<const int> m_list,
                                     std::span<const double> sample = {});

}  // namespace qbethe
