#include "qbethe/fock.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace qbethe {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    if (parts_[j] < 0) throw std::invalid_argument("partition parts must be >= 0");
    if (j > 0 && parts_[j] > parts_[j - 1]) throw std::invalid_argument("partition must be weakly decreasing");
  }
}

int Partition::total() const {
  int acc = 0;
  for (int x : parts_) acc += x;
  return acc;
}

int Partition::multiplicity(int l) const {
  return static_cast<int>(std::count(parts_.begin(), parts_.end(), l));
}

Partition Partition::with_part(int l) const {
  if (l < 0) throw std::invalid_argument("with_part: negative part");
  std::vector<int> out = parts_;
  out.insert(std::upper_bound(out.begin(), out.end(), l, std::greater<>()), l);
  return Partition(std::move(out));
}

Partition Partition::without_part(int l) const {
  std::vector<int> out = parts_;
  auto it = std::find(out.begin(), out.end(), l);
  if (it == out.end()) throw std::invalid_argument("without_part: part not present");
  out.erase(it);
  return Partition(std::move(out));
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < parts_.size(); ++j) os << (j ? "," : "") << parts_[j];
  os << ')';
  return os.str();
}

namespace {

void enumerate_into(int remaining, int cap, std::vector<int>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int l = cap; l >= 0; --l) {
    prefix.push_back(l);
    enumerate_into(remaining - 1, l, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

SectorBasis::SectorBasis(int n, int m) : n_(n), m_(m) {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  if (n < 0) return;
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(n));
  enumerate_into(n, m, prefix, parts_);
  for (std::size_t i = 0; i < parts_.size(); ++i) lookup_.emplace(parts_[i].vec(), i);
}

std::optional<std::size_t> SectorBasis::find(const Partition& p) const {
  auto it = lookup_.find(p.vec());
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t SectorBasis::index(const Partition& p) const {
  auto i = find(p);
  if (!i) throw std::out_of_range("partition " + p.to_string() + " not in sector");
  return *i;
}

SectorPtr enumerate_sector(int n, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, SectorPtr> cache;
  const int key_n = std::max(n, -1);
  std::lock_guard lock(mu);
  auto& slot = cache[{key_n, m}];
  if (!slot) slot = std::make_shared<const SectorBasis>(key_n, m);
  return slot;
}

std::size_t sector_size(int n, int m) {
  if (n < 0 || m < 0) return 0;
  // C(n+m, n) by the multiplicative formula, exact in integers
  std::size_t acc = 1;
  for (int j = 1; j <= n; ++j) acc = acc * static_cast<std::size_t>(m + j) / static_cast<std::size_t>(j);
  return acc;
}

FockVector::FockVector(SectorPtr sector)
    : sector_(std::move(sector)), amp_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sector_->size()))) {}

FockVector::FockVector(SectorPtr sector, Eigen::VectorXcd amplitudes)
    : sector_(std::move(sector)), amp_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amp_.size()) != sector_->size()) {
    throw std::invalid_argument("FockVector: amplitude length does not match sector size");
  }
}

FockVector FockVector::basis(SectorPtr sector, const Partition& p) {
  FockVector v(std::move(sector));
  v[v.sector().index(p)] = 1.0;
  return v;
}

double weight_delta(const Partition& lambda, double t) {
  double denom = 1.0;
  const auto parts = lambda.parts();
  std::size_t j = 0;
  while (j < parts.size()) {
    std::size_t k = j;
    while (k < parts.size() && parts[k] == parts[j]) ++k;
    denom *= q_factorial(static_cast<int>(k - j), t);
    j = k;
  }
  return 1.0 / denom;
}

Eigen::VectorXd weight_diagonal(const SectorBasis& sector, double t) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(sector.size()));
  for (std::size_t i = 0; i < sector.size(); ++i) w(static_cast<Eigen::Index>(i)) = weight_delta(sector[i], t);
  return w;
}

cplx inner_product(const FockVector& f, const FockVector& g, double t) {
  if (!(f.sector() == g.sector())) throw std::invalid_argument("inner_product: sector mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.sector().size(); ++i) {
    acc += f[i] * std::conj(g[i]) * weight_delta(f.sector()[i], t);
  }
  return acc;
}

double weighted_norm(const FockVector& f, double t) { return std::sqrt(std::max(0.0, inner_product(f, f, t).real())); }

FockVector apply_generator(Generator kind, int site, const FockVector& f, double t) {
  const SectorBasis& src = f.sector();
  const int m = src.m();
  if (site < 0 || site > m) throw std::invalid_argument("apply_generator: site out of range");
  switch (kind) {
    case Generator::annihilate: {
      // (beta_l f)(lambda) = f(lambda + l)
      FockVector out(enumerate_sector(src.n() - 1, m));
      for (std::size_t i = 0; i < out.sector().size(); ++i) {
        out[i] = f.at(out.sector()[i].with_part(site));
      }
      return out;
    }
    case Generator::create: {
      // (beta_l^* f)(lambda) = [m_l(lambda)] f(lambda - l)
      FockVector out(enumerate_sector(src.n() + 1, m));
      for (std::size_t i = 0; i < out.sector().size(); ++i) {
        const Partition& lam = out.sector()[i];
        const int ml = lam.multiplicity(site);
        if (ml > 0) out[i] = q_integer(ml, t) * f.at(lam.without_part(site));
      }
      return out;
    }
    case Generator::t_power_plus:
    case Generator::t_power_minus: {
      const double sign = kind == Generator::t_power_plus ? 1.0 : -1.0;
      FockVector out = f;
      for (std::size_t i = 0; i < src.size(); ++i) out[i] *= std::pow(t, sign * src[i].multiplicity(site));
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

FockVector apply_hamiltonian(const FockVector& f, const ModelParams& p) {
  const SectorBasis& sec = f.sector();
  if (sec.m() != p.m) throw std::invalid_argument("apply_hamiltonian: sector m differs from params");
  FockVector out(f.sector_ptr());
  const int n = sec.n();
  for (std::size_t i = 0; i < sec.size(); ++i) {
    const Partition& lam = sec[i];
    cplx acc = (p.a_minus * q_integer(lam.multiplicity(0), p.t) + p.a_plus * q_integer(lam.multiplicity(p.m), p.t)) * f[i];
    std::vector<int> parts = lam.vec();
    for (int j = 0; j < n; ++j) {
      const double hop = q_integer(lam.multiplicity(parts[static_cast<std::size_t>(j)]), p.t);
      for (int step : {+1, -1}) {
        std::vector<int> moved = parts;
        moved[static_cast<std::size_t>(j)] += step;
        const int v = moved[static_cast<std::size_t>(j)];
        if (v < 0 || v > p.m) continue;
        if (j > 0 && moved[static_cast<std::size_t>(j - 1)] < v) continue;
        if (j + 1 < n && moved[static_cast<std::size_t>(j + 1)] > v) continue;
        acc += hop * f.at(Partition(std::move(moved)));
      }
    }
    out[i] = acc;
  }
  return out;
}

FockVector apply_number_operator(const FockVector& f, const ModelParams& p) {
  FockVector out = f;
  out.amplitudes() *= std::pow(p.q, p.m + 1) * std::pow(p.t, f.sector().n());
  return out;
}

}  // namespace qbethe
