/// @file fock_operator.hpp
/// Operators on the whole truncation-free Fock space, stored lazily as one dense
/// block per source sector. An operator has a fixed charge (change in particle
/// number); block(n) maps sector n to sector n + charge. Blocks are memoized,
/// so products of monodromy entries are built once per sector.
#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "qbethe/fock.hpp"
#include "qbethe/kernels.hpp"

namespace qbethe {

class FockOperator {
 public:
  using Builder = std::function<Eigen::MatrixXcd(int n)>;

  FockOperator(int m, int charge, Builder build);

  static FockOperator zero(int m, int charge = 0);
  static FockOperator scalar(int m, cplx value);
  /// Diagonal on each sector with a sector-dependent scalar.
  static FockOperator sector_scalar(int m, std::function<cplx(int n)> value);
  /// Matrix of an action that maps sector n to n + charge for every n.
  static FockOperator from_action(int m, int charge, OperatorAction action);
  static FockOperator generator(Generator kind, int site, int m, double t);

  [[nodiscard]] int sites() const { return node_->m; }
  [[nodiscard]] int charge() const { return node_->charge; }
  [[nodiscard]] bool is_zero() const { return node_->zero; }
  /// dim(n + charge) x dim(n); empty when either sector is empty.
  [[nodiscard]] const Eigen::MatrixXcd& block(int n) const;

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator+(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(cplx c, const FockOperator& a);
  friend FockOperator operator-(const FockOperator& a) { return cplx(-1.0) * a; }

 private:
  struct Node {
    int m = 0;
    int charge = 0;
    bool zero = false;
    Builder build;
    mutable std::mutex mu;
    mutable std::map<int, Eigen::MatrixXcd> cache;
  };
  explicit FockOperator(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Weighted adjoint: (X f, g) = (f, X^* g) on the sectors involved.
FockOperator adjoint(const FockOperator& x, double t);
/// Site reversal l -> m - l, realized by conjugation with the basis permutation.
FockOperator site_reversal(const FockOperator& x);
/// Permutation matrix of lambda -> reversed partition on one sector.
Eigen::MatrixXcd reversal_permutation(int n, int m);

/// max over sectors n of relative_deviation(a.block(n), b.block(n)).
double operator_deviation(const FockOperator& a, const FockOperator& b, std::span<const int> sectors);

/// 2x2 matrix with operator entries (row-major a, b; c, d).
struct OpMatrix2 {
  FockOperator a, b, c, d;
  friend OpMatrix2 operator*(const OpMatrix2& x, const OpMatrix2& y);
};

}  // namespace qbethe
