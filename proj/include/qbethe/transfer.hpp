/// @file transfer.hpp
/// Periodic and boundary monodromy entries, the boundary transfer operator and
/// the creation operator, each available two ways:
///  - explicit Fock-space actions via horizontal-strip sums (the fast path);
///  - as products of Lax matrices over FockOperator entries (the reference path).
#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "qbethe/fock_operator.hpp"
#include "qbethe/strips.hpp"

namespace qbethe {

enum class Entry { A, B, C, D };

/// Change in particle number: A, D keep it, B raises, C lowers.
int entry_charge(Entry which);

// ---- explicit actions ------------------------------------------------------

FockVector apply_periodic(Entry which, cplx u, const FockVector& f, double t);

/// Double-strip coefficient X_{lambda,mu}(z) without the sector prefactor.
/// Source sector is the one of mu. Zero when no admissible intermediate exists.
cplx boundary_coeff(Entry which, const Partition& lambda, const Partition& mu, cplx z, double a, int m, double t);

FockVector apply_boundary(Entry which, cplx u, double a, const FockVector& f, const ModelParams& p);
FockVector apply_transfer(cplx u, const FockVector& f, const ModelParams& p);

/// b(u) = q s(q) s(q u^2)
cplx creation_normalization(cplx u, double q);
/// B-hat(u) = b(u)^{-1} B(u; a) N
FockVector apply_creation(cplx u, double a, const FockVector& f, const ModelParams& p, double singularity_floor = 1e-6);
/// D-hat(u) = D(u; a) + s(q)/s(u^2) A(u; a)
FockVector apply_dhat(cplx u, double a, const FockVector& f, const ModelParams& p);

// ---- the same as lazily-evaluated operators --------------------------------

FockOperator periodic_operator(Entry which, cplx u, int m, double t);
FockOperator boundary_operator(Entry which, cplx u, double a, const ModelParams& p);
FockOperator transfer_operator(cplx u, const ModelParams& p);
FockOperator creation_operator(cplx u, double a, const ModelParams& p);
FockOperator dhat_operator(cplx u, double a, const ModelParams& p);
FockOperator hamiltonian_operator(const ModelParams& p);
FockOperator number_operator(const ModelParams& p);

// ---- Lax-product route ------------------------------------------------------

OpMatrix2 lax_matrix(int site, cplx u, int m, double t);
OpMatrix2 lax_inverse(int site, cplx u, int m, double t);
/// L_m(u) ... L_0(u)
OpMatrix2 periodic_monodromy_lax(cplx u, int m, double t);
/// L_0^{-1}(u) ... L_m^{-1}(u)
OpMatrix2 periodic_monodromy_inverse_lax(cplx u, int m, double t);
/// U(u) K_-(u; a) U^{-1}(1/(q u))
OpMatrix2 boundary_monodromy_lax(cplx u, double a, const ModelParams& p);
/// f(1/u; a+) A + e(1/u; a+) D with the Lax-product boundary entries.
FockOperator transfer_lax(cplx u, const ModelParams& p);

// ---- eigenvalues -------------------------------------------------------------

struct TransferEigenvalues {
  cplx transfer;       // E^{(n,m)}(u; xi)
  double hamiltonian;  // sum_j 2 cos(xi_j)
};

/// Closed-form eigenvalues at v_j = exp(i xi_j / 2). Throws std::domain_error on pole proximity.
TransferEigenvalues bethe_eigenvalues(cplx u, std::span<const double> xi, const ModelParams& p,
                                      double singularity_floor = 1e-6);
/// Same eigenvalue written in the spectral variables v_j (product-of-s form).
cplx transfer_eigenvalue_v(cplx u, std::span<const cplx> v, const ModelParams& p);

// ---- Laurent coefficient extraction --------------------------------------

/// Coefficients c_k, k = lowest..highest, of F(w) = sum_k c_k w^k from samples on
/// |w| = radius at (highest - lowest + 1) equally spaced points. Exact for Laurent
/// polynomials supported in that range; the sampling is a unitary transform, so
/// no extended precision is needed.
std::vector<Eigen::MatrixXcd> laurent_coefficients(const std::function<Eigen::MatrixXcd(cplx w)>& fn, int lowest,
                                                   int highest, double radius = 1.0);

}  // namespace qbethe
