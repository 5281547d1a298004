/// @file fock.hpp
/// Particle-number sectors of the q-boson Fock space, their weighted inner
/// product and the generator / Hamiltonian actions.
#pragma once

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbethe/core.hpp"

namespace qbethe {

/// Weakly decreasing vector of non-negative parts; zero parts are explicit.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  [[nodiscard]] std::span<const int> parts() const { return parts_; }
  [[nodiscard]] const std::vector<int>& vec() const { return parts_; }
  [[nodiscard]] int length() const { return static_cast<int>(parts_.size()); }
  [[nodiscard]] int operator[](int j) const { return parts_[static_cast<std::size_t>(j)]; }
  /// |lambda|
  [[nodiscard]] int total() const;
  [[nodiscard]] int multiplicity(int l) const;
  [[nodiscard]] bool fits(int m) const { return parts_.empty() || parts_.front() <= m; }

  [[nodiscard]] Partition with_part(int l) const;
  /// Removes one copy of l; throws if absent.
  [[nodiscard]] Partition without_part(int l) const;

  [[nodiscard]] std::string to_string() const;

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

/// All partitions of Lambda_{n,m} in reverse-lexicographic order (largest first).
/// n < 0 gives an empty basis, which keeps lowering operators total.
class SectorBasis {
 public:
  SectorBasis(int n, int m);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] std::size_t size() const { return parts_.size(); }
  [[nodiscard]] const Partition& operator[](std::size_t i) const { return parts_[i]; }
  [[nodiscard]] const std::vector<Partition>& partitions() const { return parts_; }
  [[nodiscard]] std::optional<std::size_t> find(const Partition& p) const;
  /// Throws std::out_of_range when p is not in the sector.
  [[nodiscard]] std::size_t index(const Partition& p) const;

  bool operator==(const SectorBasis& o) const { return n_ == o.n_ && m_ == o.m_; }

 private:
  int n_;
  int m_;
  std::vector<Partition> parts_;
  std::map<std::vector<int>, std::size_t> lookup_;
};

using SectorPtr = std::shared_ptr<const SectorBasis>;

/// Memoized, thread-safe enumeration.
SectorPtr enumerate_sector(int n, int m);
/// (n+m)!/(n! m!), zero for n < 0.
std::size_t sector_size(int n, int m);

class FockVector {
 public:
  explicit FockVector(SectorPtr sector);
  FockVector(SectorPtr sector, Eigen::VectorXcd amplitudes);
  static FockVector basis(SectorPtr sector, const Partition& p);

  [[nodiscard]] const SectorBasis& sector() const { return *sector_; }
  [[nodiscard]] const SectorPtr& sector_ptr() const { return sector_; }
  [[nodiscard]] const Eigen::VectorXcd& amplitudes() const { return amp_; }
  [[nodiscard]] Eigen::VectorXcd& amplitudes() { return amp_; }
  [[nodiscard]] cplx at(const Partition& p) const { return amp_(static_cast<Eigen::Index>(sector_->index(p))); }
  [[nodiscard]] cplx operator[](std::size_t i) const { return amp_(static_cast<Eigen::Index>(i)); }
  [[nodiscard]] cplx& operator[](std::size_t i) { return amp_(static_cast<Eigen::Index>(i)); }

 private:
  SectorPtr sector_;
  Eigen::VectorXcd amp_;
};

using OperatorAction = std::function<FockVector(const FockVector&)>;

/// 1 / prod_l [m_l(lambda)]!
double weight_delta(const Partition& lambda, double t);
Eigen::VectorXd weight_diagonal(const SectorBasis& sector, double t);
double weighted_norm(const FockVector& f, double t);
cplx inner_product(const FockVector& f, const FockVector& g, double t);

enum class Generator { annihilate, create, t_power_plus, t_power_minus };

/// beta_l lowers n, beta_l^* raises n, t^{+-N_l} is diagonal.
FockVector apply_generator(Generator kind, int site, const FockVector& f, double t);
FockVector apply_hamiltonian(const FockVector& f, const ModelParams& p);
/// N_m acts as q^{m+1} t^n.
FockVector apply_number_operator(const FockVector& f, const ModelParams& p);

}  // namespace qbethe
