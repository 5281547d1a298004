/// @file hall_littlewood.hpp
/// n-particle eigenfunctions of the open q-boson chain, built three ways
/// (branching rule, products of creation operators, hyperoctahedral
/// Hall-Littlewood symmetrization), plus Pieri residuals and the discrete Gram matrix.
#pragma once

#include <span>
#include <vector>

#include "qbethe/bethe.hpp"
#include "qbethe/fock.hpp"

namespace qbethe {

struct SpectralVariables {
  std::vector<cplx> v;

  /// v_j = exp(i xi_j / 2), principal branch.
  static SpectralVariables from_xi(std::span<const double> xi);
  [[nodiscard]] int size() const { return static_cast<int>(v.size()); }
};

struct HLParams {
  double t = 0.36;
  double a = 0.0;
  double a_hat = 0.0;
};

/// s_l(z) with s_{-1} = 0, s_0 = 1, via the three-term recursion.
cplx chebyshev_s(int l, cplx z);
/// s_l(v^2) - a s_{l-1}(v^2)
cplx one_particle_wave(cplx v, double a, int l);

/// Branching coefficient from mu in Lambda_{n-1,m} to lambda in Lambda_{n,m}.
cplx branch_coeff(const Partition& lambda, const Partition& mu, cplx z, double t, double a, int m,
                  double singularity_floor = 1e-6);

/// Eigenfunction on Lambda_{n,m} with n = v.size(), by iterated branching from one particle.
FockVector wave_by_branching(const SpectralVariables& v, const ModelParams& p, double singularity_floor = 1e-6);
/// Same function as creation operators applied to the vacuum.
FockVector wave_by_creation(const SpectralVariables& v, const ModelParams& p, double singularity_floor = 1e-6);

/// Full S_n x {+-1}^n symmetrization sum; n <= 6.
cplx hl_direct(const Partition& lambda, std::span<const cplx> z, const HLParams& hp, double singularity_floor = 1e-6);
/// hl_direct at z_j = v_j^2 over a whole sector.
FockVector wave_by_symmetrization(const SpectralVariables& v, const ModelParams& p, double singularity_floor = 1e-6);

enum class PieriMode { nearest_neighbour, transfer };

struct PieriResidual {
  double residual = 0.0;  // |lhs - rhs|
  double scale = 0.0;     // max(|lhs|, |rhs|, largest summand)
};

/// Residual of the Pieri relation at z_j = exp(i xi_j) for one target nu.
/// `transfer` mode uses the double-strip coefficients at spectral parameter u.
PieriResidual pieri_residual(const SpectralPoint& point, const Partition& nu, const ModelParams& p,
                             PieriMode mode = PieriMode::nearest_neighbour, cplx u = 0.6);

/// Weighted Gram matrix of the eigenfunctions at the given spectral points.
Eigen::MatrixXcd gram_discrete(std::span<const SpectralPoint> points, const ModelParams& p);

}  // namespace qbethe
