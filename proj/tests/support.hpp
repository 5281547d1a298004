// Shared helpers for the unit tests: deterministic random inputs and small
// independent reference implementations used as oracles.
#pragma once

#include <complex>
#include <random>
#include <vector>

#include <doctest.h>

#include "qbethe/fock.hpp"

namespace qbethe::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline cplx random_complex() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

inline FockVector random_vector(int n, int m) {
  FockVector f(enumerate_sector(n, m));
  for (std::size_t i = 0; i < f.sector().size(); ++i) f[i] = random_complex();
  return f;
}

// Brute-force count of weakly decreasing n-tuples with entries in 0..m.
inline std::size_t count_by_recursion(int n, int m, int cap) {
  if (n == 0) return 1;
  std::size_t total = 0;
  for (int first = 0; first <= std::min(m, cap); ++first) total += count_by_recursion(n - 1, m, first);
  return total;
}

inline double qint(int k, double t) {
  double s = 0.0;
  double p = 1.0;
  for (int i = 0; i < k; ++i) {
    s += p;
    p *= t;
  }
  return s;
}

inline int mult(const std::vector<int>& parts, int l) {
  int c = 0;
  for (int x : parts) c += x == l;
  return c;
}

// Weighted inner product written out from the multiplicities.
inline cplx weighted_inner(const FockVector& f, const FockVector& g, double t) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.sector().size(); ++i) {
    double w = 1.0;
    for (int l = 0; l <= f.sector().m(); ++l) {
      for (int k = 1; k <= mult(f.sector()[i].vec(), l); ++k) w /= qint(k, t);
    }
    s += w * f[i] * std::conj(g[i]);
  }
  return s;
}

// Nearest-neighbour hopping Hamiltonian evaluated pointwise on the sector.
inline FockVector hamiltonian_oracle(const FockVector& f, const ModelParams& p) {
  FockVector out(f.sector_ptr());
  const auto& basis = f.sector();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::vector<int> lam = basis[i].vec();
    cplx acc = (p.a_minus * qint(mult(lam, 0), p.t) + p.a_plus * qint(mult(lam, p.m), p.t)) * f[i];
    for (std::size_t j = 0; j < lam.size(); ++j) {
      for (int step : {1, -1}) {
        std::vector<int> mu = lam;
        mu[j] += step;
        if (mu[j] < 0 || mu[j] > p.m) continue;
        if ((j > 0 && mu[j] > mu[j - 1]) || (j + 1 < mu.size() && mu[j] < mu[j + 1])) continue;
        acc += qint(mult(lam, lam[j]), p.t) * f.at(Partition(mu));
      }
    }
    out[i] = acc;
  }
  return out;
}

inline double rel(cplx a, cplx b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace qbethe::testing
