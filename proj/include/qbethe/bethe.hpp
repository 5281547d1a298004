/// @file bethe.hpp
/// Spectral points as minima of strictly convex Morse functions: the lattice
/// problem for the open q-boson chain and its continuum counterpart for the
/// delta-interacting Bose gas on a segment with Robin ends.
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbethe/fock.hpp"

namespace qbethe {

enum class Flavor { lattice, continuum };

std::string to_string(Flavor f);

class MorseProblem {
 public:
  static MorseProblem lattice(const ModelParams& p, Partition lambda);
  static MorseProblem continuum(const ContinuumParams& p, Partition lambda);

  [[nodiscard]] Flavor flavor() const { return flavor_; }
  [[nodiscard]] const ModelParams& lattice_params() const { return lattice_; }
  [[nodiscard]] const ContinuumParams& continuum_params() const { return continuum_; }
  [[nodiscard]] const Partition& lambda() const { return lambda_; }
  [[nodiscard]] int size() const { return lambda_.length(); }
  /// rho + lambda at zero-based index j, with rho = (n, n-1, ..., 1)
  [[nodiscard]] double shifted(int j) const { return size() - j + lambda_[j]; }

 private:
  MorseProblem(Flavor f, ModelParams lp, ContinuumParams cp, Partition lambda);

  Flavor flavor_;
  ModelParams lattice_;
  ContinuumParams continuum_;
  Partition lambda_;
};

struct SpectralPoint {
  std::vector<double> xi;
  Partition lambda;
  double grad_norm = 0.0;
  int iterations = 0;
  Flavor flavor = Flavor::lattice;
};

struct SolverOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
  int max_halvings = 60;
};

/// Raised when Newton stalls; carries the last iterate.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> last_xi, double last_grad, int iterations)
      : std::runtime_error(what), xi(std::move(last_xi)), grad_norm(last_grad), iterations(iterations) {}
  std::vector<double> xi;
  double grad_norm;
  int iterations;
};

/// Odd, increasing, with v_a(theta + 2 pi) = v_a(theta) + 2 pi.
double v_a(double theta, double a);
double v_a_prime(double theta, double a);

Eigen::VectorXd morse_gradient(const MorseProblem& prob, std::span<const double> xi);
Eigen::MatrixXd morse_hessian(const MorseProblem& prob, std::span<const double> xi);
/// Morse function value by adaptive quadrature of its integral terms (slow; for checks).
double morse_value(const MorseProblem& prob, std::span<const double> xi);

/// Newton start: the small-coupling limit (lattice) or the bracket midpoint (continuum).
std::vector<double> initial_guess(const MorseProblem& prob);
SpectralPoint solve_spectral_point(const MorseProblem& prob, const SolverOptions& opts = {});

/// max_j of |lhs - rhs| of the exponentiated Bethe equations.
double bae_residual(const MorseProblem& prob, std::span<const double> xi);

struct BoundCheck {
  bool chamber = false;      // xi_1 > ... > xi_n > 0
  bool alcove = false;       // lattice: xi_1 < pi; continuum: always true
  bool moment_bounds = false;
  bool gap_bounds = false;
  /// Smallest relative slack over all strict inequalities (negative on violation).
  double min_margin = 0.0;
  [[nodiscard]] bool all() const { return chamber && alcove && moment_bounds && gap_bounds; }
};

BoundCheck check_bounds(const MorseProblem& prob, std::span<const double> xi);
/// (kappa_minus, kappa_plus) for the lattice bounds; (kappa, 0) for continuum.
std::pair<double, double> bound_constants(const MorseProblem& prob);

/// W(u) = F(qu) G(u) - F(u) G(qu) with F, G built from exp(i xi / 2).
cplx casoratian(cplx u, std::span<const double> xi1, std::span<const double> xi2, double q);

/// Spectral points for every lambda in Lambda_{n,m}, in sector order.
std::vector<SpectralPoint> solve_sector(const ModelParams& p, const SolverOptions& opts = {});
std::vector<SpectralPoint> solve_sector_serial(const ModelParams& p, const SolverOptions& opts = {});

/// The first `count` partitions of length n with parts >= 0, by size then reverse-lex.
std::vector<Partition> leading_partitions(int n, int count);

}  // namespace qbethe
