/// @file kernels.hpp
/// Data-parallel kernels. Each OpenMP routine has a `_serial` twin that
/// tests use as the reference; both produce bitwise identical results.
#pragma once

#include <vector>

#include "qbethe/fock.hpp"

namespace qbethe {

/// Dense matrix of an operator between two sectors (target size x source size).
struct OperatorMatrix {
  SectorPtr source;
  SectorPtr target;
  Eigen::MatrixXcd entries;
};

/// Columns are images of the source basis vectors, in basis order.
OperatorMatrix operator_matrix(const OperatorAction& op, const SectorPtr& source, const SectorPtr& target,
                               const SectorLimits& limits = {});
OperatorMatrix operator_matrix_serial(const OperatorAction& op, const SectorPtr& source, const SectorPtr& target,
                                      const SectorLimits& limits = {});

/// G(i,j) = (f_i, f_j) in the weighted inner product.
Eigen::MatrixXcd gram(const std::vector<FockVector>& vectors, double t);
Eigen::MatrixXcd gram_serial(const std::vector<FockVector>& vectors, double t);

/// max_{i!=j} |G_ij| / sqrt(G_ii G_jj)
double max_offdiag_correlation(const Eigen::MatrixXcd& g);

}  // namespace qbethe
