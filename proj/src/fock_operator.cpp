#include "qbethe/fock_operator.hpp"

#include <algorithm>

namespace qbethe {

namespace {

Eigen::MatrixXcd zero_block(int m, int charge, int n) {
  return Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(sector_size(n + charge, m)),
                                static_cast<Eigen::Index>(sector_size(n, m)));
}

}  // namespace

FockOperator::FockOperator(int m, int charge, Builder build) {
  auto node = std::make_shared<Node>();
  node->m = m;
  node->charge = charge;
  node->build = std::move(build);
  node_ = std::move(node);
}

FockOperator FockOperator::zero(int m, int charge) {
  auto node = std::make_shared<Node>();
  node->m = m;
  node->charge = charge;
  node->zero = true;
  node->build = [m, charge](int n) { return zero_block(m, charge, n); };
  return FockOperator(std::shared_ptr<const Node>(std::move(node)));
}

FockOperator FockOperator::scalar(int m, cplx value) {
  return sector_scalar(m, [value](int) { return value; });
}

FockOperator FockOperator::sector_scalar(int m, std::function<cplx(int n)> value) {
  return FockOperator(m, 0, [m, value = std::move(value)](int n) -> Eigen::MatrixXcd {
    const auto d = static_cast<Eigen::Index>(sector_size(n, m));
    return value(n) * Eigen::MatrixXcd::Identity(d, d);
  });
}

FockOperator FockOperator::from_action(int m, int charge, OperatorAction action) {
  return FockOperator(m, charge, [m, charge, action = std::move(action)](int n) -> Eigen::MatrixXcd {
    if (n < 0 || n + charge < 0) return zero_block(m, charge, n);
    return operator_matrix(action, enumerate_sector(n, m), enumerate_sector(n + charge, m)).entries;
  });
}

FockOperator FockOperator::generator(Generator kind, int site, int m, double t) {
  const int charge = kind == Generator::annihilate ? -1 : kind == Generator::create ? 1 : 0;
  return from_action(m, charge, [kind, site, t](const FockVector& f) { return apply_generator(kind, site, f, t); });
}

const Eigen::MatrixXcd& FockOperator::block(int n) const {
  std::lock_guard lock(node_->mu);
  auto it = node_->cache.find(n);
  if (it != node_->cache.end()) return it->second;
  Eigen::MatrixXcd value = (n < 0 || n + node_->charge < 0) ? zero_block(node_->m, node_->charge, n) : node_->build(n);
  return node_->cache.emplace(n, std::move(value)).first->second;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  if (a.sites() != b.sites()) throw std::invalid_argument("FockOperator: site count mismatch");
  const int charge = a.charge() + b.charge();
  if (a.is_zero() || b.is_zero()) return FockOperator::zero(a.sites(), charge);
  return FockOperator(a.sites(), charge, [a, b](int n) -> Eigen::MatrixXcd {
    return a.block(n + b.charge()) * b.block(n);
  });
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  if (a.sites() != b.sites()) throw std::invalid_argument("FockOperator: site count mismatch");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.charge() != b.charge()) throw std::invalid_argument("FockOperator: adding operators of different charge");
  return FockOperator(a.sites(), a.charge(), [a, b](int n) -> Eigen::MatrixXcd { return a.block(n) + b.block(n); });
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) { return a + cplx(-1.0) * b; }

FockOperator operator*(cplx c, const FockOperator& a) {
  if (a.is_zero() || c == cplx(0.0)) return FockOperator::zero(a.sites(), a.charge());
  return FockOperator(a.sites(), a.charge(), [c, a](int n) -> Eigen::MatrixXcd { return c * a.block(n); });
}

FockOperator adjoint(const FockOperator& x, double t) {
  const int m = x.sites();
  const int c = x.charge();
  if (x.is_zero()) return FockOperator::zero(m, -c);
  // source k of the adjoint is the target of x acting on k - c
  return FockOperator(m, -c, [x, m, c, t](int k) -> Eigen::MatrixXcd {
    const Eigen::VectorXd w_src = weight_diagonal(*enumerate_sector(k, m), t);
    const Eigen::VectorXd w_tgt = weight_diagonal(*enumerate_sector(k - c, m), t);
    const Eigen::MatrixXcd& fwd = x.block(k - c);
    return w_tgt.cwiseInverse().asDiagonal() * fwd.adjoint() * w_src.asDiagonal();
  });
}

Eigen::MatrixXcd reversal_permutation(int n, int m) {
  const SectorPtr sec = enumerate_sector(n, m);
  const auto d = static_cast<Eigen::Index>(sec->size());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i < sec->size(); ++i) {
    std::vector<int> parts = (*sec)[i].vec();
    for (int& x : parts) x = m - x;
    std::sort(parts.begin(), parts.end(), std::greater<>());
    p(static_cast<Eigen::Index>(sec->index(Partition(std::move(parts)))), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return p;
}

FockOperator site_reversal(const FockOperator& x) {
  const int m = x.sites();
  const int c = x.charge();
  if (x.is_zero()) return x;
  return FockOperator(m, c, [x, m, c](int n) -> Eigen::MatrixXcd {
    return reversal_permutation(n + c, m) * x.block(n) * reversal_permutation(n, m);
  });
}

double operator_deviation(const FockOperator& a, const FockOperator& b, std::span<const int> sectors) {
  double worst = 0.0;
  for (int n : sectors) worst = std::max(worst, relative_deviation(a.block(n), b.block(n)));
  return worst;
}

OpMatrix2 operator*(const OpMatrix2& x, const OpMatrix2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

}  // namespace qbethe
