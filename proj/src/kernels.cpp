#include "qbethe/kernels.hpp"

#include <cmath>
#include <exception>

namespace qbethe {

namespace {

void check_dense(const SectorPtr& source, const SectorPtr& target, const SectorLimits& limits) {
  if (source->size() > limits.max_dense || target->size() > limits.max_dense) {
    throw std::length_error("operator_matrix: sector exceeds the dense size cap");
  }
}

void store_column(OperatorMatrix& out, std::size_t j, const FockVector& image) {
  if (!(image.sector() == *out.target)) {
    throw std::logic_error("operator_matrix: operator left the declared target sector");
  }
  out.entries.col(static_cast<Eigen::Index>(j)) = image.amplitudes();
}

OperatorMatrix empty_matrix(const SectorPtr& source, const SectorPtr& target) {
  return {source, target,
          Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(target->size()), static_cast<Eigen::Index>(source->size()))};
}

}  // namespace

OperatorMatrix operator_matrix_serial(const OperatorAction& op, const SectorPtr& source, const SectorPtr& target,
                                      const SectorLimits& limits) {
  check_dense(source, target, limits);
  OperatorMatrix out = empty_matrix(source, target);
  for (std::size_t j = 0; j < source->size(); ++j) {
    store_column(out, j, op(FockVector::basis(source, (*source)[j])));
  }
  return out;
}

OperatorMatrix operator_matrix(const OperatorAction& op, const SectorPtr& source, const SectorPtr& target,
                               const SectorLimits& limits) {
  check_dense(source, target, limits);
  OperatorMatrix out = empty_matrix(source, target);
  const auto cols = static_cast<long>(source->size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (long j = 0; j < cols; ++j) {
    try {
      const auto col = static_cast<std::size_t>(j);
      store_column(out, col, op(FockVector::basis(source, (*source)[col])));
    } catch (...) {
#pragma omp critical(qbethe_operator_matrix)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Eigen::MatrixXcd gram_serial(const std::vector<FockVector>& vectors, double t) {
  const auto k = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXcd g(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      g(i, j) = inner_product(vectors[static_cast<std::size_t>(i)], vectors[static_cast<std::size_t>(j)], t);
    }
  }
  return g;
}

Eigen::MatrixXcd gram(const std::vector<FockVector>& vectors, double t) {
  const auto k = static_cast<long>(vectors.size());
  Eigen::MatrixXcd g(k, k);
  std::exception_ptr failure;
  // each (i,j) is written once; the summation order inside inner_product is fixed
#pragma omp parallel for collapse(2) schedule(static)
  for (long i = 0; i < k; ++i) {
    for (long j = 0; j < k; ++j) {
      try {
        g(i, j) = inner_product(vectors[static_cast<std::size_t>(i)], vectors[static_cast<std::size_t>(j)], t);
      } catch (...) {
#pragma omp critical(qbethe_gram)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return g;
}

double max_offdiag_correlation(const Eigen::MatrixXcd& g) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i == j) continue;
      const double denom = std::sqrt(std::abs(g(i, i)) * std::abs(g(j, j)));
      worst = std::max(worst, std::abs(g(i, j)) / denom);
    }
  }
  return worst;
}

}  // namespace qbethe
