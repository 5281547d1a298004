#include "qbethe/hall_littlewood.hpp"

#include <algorithm>
#include <numeric>

#include "qbethe/kernels.hpp"
#include "qbethe/strips.hpp"
#include "qbethe/transfer.hpp"

namespace qbethe {

SpectralVariables SpectralVariables::from_xi(std::span<const double> xi) {
  SpectralVariables out;
  for (double x : xi) out.v.push_back(std::exp(cplx(0.0, 0.5 * x)));
  return out;
}

cplx chebyshev_s(int l, cplx z) {
  if (l < 0) return 0.0;
  const cplx c = z + 1.0 / z;
  cplx prev = 0.0;
  cplx cur = 1.0;
  for (int k = 0; k < l; ++k) {
    const cplx next = c * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

cplx one_particle_wave(cplx v, double a, int l) {
  if (v == cplx(0.0)) throw std::domain_error("one_particle_wave: v = 0");
  const cplx z = v * v;
  return chebyshev_s(l, z) - a * chebyshev_s(l - 1, z);
}

namespace {

// Visits (mu, weight) for every mu in Lambda_{n-1,m} reachable from lambda through an
// intermediate nu; the two intermediate families carry different boundary factors.
template <typename Visit>
void branch_terms(const Partition& lambda, cplx z, double t, double a, Visit&& visit) {
  const int n = lambda.length();
  const cplx denom = (1.0 - t) * (1.0 / z - t * z);
  const cplx upper = (1.0 / z - a) / denom;
  const cplx lower = (a - t * z) / denom;
  for (int pass = 0; pass < 2; ++pass) {
    const cplx factor = pass == 0 ? upper : lower;
    for (const Partition& nu : strips_below(lambda, pass == 0 ? n : n - 1)) {
      const double outer = phi_weight(lambda, nu, t);
      for (const Partition& mu : strips_below(nu, n - 1)) {
        const int power = lambda.total() + mu.total() - 2 * nu.total();
        visit(mu, factor * outer * phi_weight(nu, mu, t) * ipow(z, power));
      }
    }
  }
}

void guard_branch(cplx z, double t, double floor) { guard_denominator(1.0 / z - t * z, floor, "1/z - t z"); }

}  // namespace

cplx branch_coeff(const Partition& lambda, const Partition& mu, cplx z, double t, double a, int m,
                  double singularity_floor) {
  if (lambda.length() != mu.length() + 1) throw std::invalid_argument("branch_coeff: lengths must differ by one");
  if (!lambda.fits(m) || !mu.fits(m)) throw std::invalid_argument("branch_coeff: partitions exceed the lattice");
  guard_branch(z, t, singularity_floor);
  cplx total = 0.0;
  branch_terms(lambda, z, t, a, [&](const Partition& cand, cplx w) {
    if (cand == mu) total += w;
  });
  return total;
}

FockVector wave_by_branching(const SpectralVariables& v, const ModelParams& p, double singularity_floor) {
  const int n = v.size();
  if (n < 1) throw std::invalid_argument("wave_by_branching: need at least one spectral variable");
  FockVector psi(enumerate_sector(1, p.m));
  for (std::size_t i = 0; i < psi.sector().size(); ++i) psi[i] = one_particle_wave(v.v[0], p.a_minus, psi.sector()[i][0]);
  for (int j = 1; j < n; ++j) {
    const cplx z = v.v[static_cast<std::size_t>(j)] * v.v[static_cast<std::size_t>(j)];
    guard_branch(z, p.t, singularity_floor);
    FockVector next(enumerate_sector(j + 1, p.m));
    for (std::size_t i = 0; i < next.sector().size(); ++i) {
      cplx acc = 0.0;
      branch_terms(next.sector()[i], z, p.t, p.a_minus, [&](const Partition& mu, cplx w) { acc += w * psi.at(mu); });
      next[i] = acc;
    }
    psi = std::move(next);
  }
  return psi;
}

FockVector wave_by_creation(const SpectralVariables& v, const ModelParams& p, double singularity_floor) {
  FockVector psi = FockVector::basis(enumerate_sector(0, p.m), Partition{});
  // rightmost factor acts first; the family commutes, so the order only matters for roundoff
  for (auto it = v.v.rbegin(); it != v.v.rend(); ++it) {
    psi = apply_creation(*it, p.a_minus, psi, p, singularity_floor);
  }
  return psi;
}

cplx hl_direct(const Partition& lambda, std::span<const cplx> z, const HLParams& hp, double singularity_floor) {
  const int n = lambda.length();
  if (static_cast<int>(z.size()) != n) throw std::invalid_argument("hl_direct: need one variable per part");
  if (n > 6) throw std::invalid_argument("hl_direct: n > 6 exceeds the symmetrization budget");
  for (int j = 0; j < n; ++j) {
    const cplx zj = z[static_cast<std::size_t>(j)];
    guard_denominator(zj, singularity_floor, "z_j");
    guard_denominator(zj * zj - 1.0, singularity_floor, "z_j^2 - 1");
    for (int k = j + 1; k < n; ++k) {
      const cplx zk = z[static_cast<std::size_t>(k)];
      guard_denominator(zj * zk - 1.0, singularity_floor, "z_j z_k - 1");
      guard_denominator(zj / zk - 1.0, singularity_floor, "z_j / z_k - 1");
    }
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<cplx> w(static_cast<std::size_t>(n));
  cplx total = 0.0;
  do {
    for (unsigned signs = 0; signs < (1U << n); ++signs) {
      for (int j = 0; j < n; ++j) {
        const cplx x = z[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
        w[static_cast<std::size_t>(j)] = (signs >> j) & 1U ? 1.0 / x : x;
      }
      cplx c = 1.0;
      for (int j = 0; j < n; ++j) {
        const cplx wj = w[static_cast<std::size_t>(j)];
        c *= (wj - hp.a) * (wj - hp.a_hat) / (wj * wj - 1.0) * ipow(wj, lambda[j]);
        for (int k = j + 1; k < n; ++k) {
          const cplx wk = w[static_cast<std::size_t>(k)];
          c *= (wj * wk - hp.t) / (wj * wk - 1.0) * (wj / wk - hp.t) / (wj / wk - 1.0);
        }
      }
      total += c;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

FockVector wave_by_symmetrization(const SpectralVariables& v, const ModelParams& p, double singularity_floor) {
  std::vector<cplx> z;
  for (cplx x : v.v) z.push_back(x * x);
  FockVector out(enumerate_sector(v.size(), p.m));
  const HLParams hp{p.t, p.a_minus, 0.0};
  for (std::size_t i = 0; i < out.sector().size(); ++i) out[i] = hl_direct(out.sector()[i], z, hp, singularity_floor);
  return out;
}

PieriResidual pieri_residual(const SpectralPoint& point, const Partition& nu, const ModelParams& p, PieriMode mode,
                             cplx u) {
  const int n = nu.length();
  if (static_cast<int>(point.xi.size()) != n) throw std::invalid_argument("pieri_residual: size mismatch");
  if (!nu.fits(p.m)) throw std::invalid_argument("pieri_residual: nu outside the lattice");
  std::vector<cplx> z;
  for (double x : point.xi) z.push_back(std::exp(cplx(0.0, x)));
  const HLParams hp{p.t, p.a_minus, 0.0};
  auto poly = [&](const Partition& mu) { return hl_direct(mu, z, hp); };
  const cplx p_nu = poly(nu);
  PieriResidual out;
  cplx lhs;
  cplx rhs = 0.0;
  double biggest = 0.0;
  if (mode == PieriMode::nearest_neighbour) {
    cplx energy = 0.0;
    for (cplx zj : z) energy += zj + 1.0 / zj;
    lhs = p_nu * energy;
    rhs = (p.a_minus * q_integer(nu.multiplicity(0), p.t) + p.a_plus * q_integer(nu.multiplicity(p.m), p.t)) * p_nu;
    biggest = std::abs(rhs);
    for (int j = 0; j < n; ++j) {
      for (int step : {1, -1}) {
        std::vector<int> parts = nu.vec();
        parts[static_cast<std::size_t>(j)] += step;
        const int x = parts[static_cast<std::size_t>(j)];
        if (x < 0 || x > p.m || !std::is_sorted(parts.begin(), parts.end(), std::greater<>())) continue;
        const cplx term = q_integer(nu.multiplicity(nu[j]), p.t) * poly(Partition(std::move(parts)));
        biggest = std::max(biggest, std::abs(term));
        rhs += term;
      }
    }
  } else {
    lhs = p_nu * bethe_eigenvalues(u, point.xi, p).transfer;
    const cplx zz = u * u;
    const cplx pref = ipow(p.q, -p.m) * ipow(p.t, -n - 1);
    for (const Partition& mu : enumerate_sector(n, p.m)->partitions()) {
      const cplx ca = boundary_coeff(Entry::A, nu, mu, zz, p.a_minus, p.m, p.t);
      const cplx cd = boundary_coeff(Entry::D, nu, mu, zz, p.a_minus, p.m, p.t);
      if (ca == cplx(0.0) && cd == cplx(0.0)) continue;
      const cplx term = pref * ((p.a_plus - p.t / zz) * ca + (p.a_plus - zz) * cd) * poly(mu);
      biggest = std::max(biggest, std::abs(term));
      rhs += term;
    }
  }
  out.residual = std::abs(lhs - rhs);
  out.scale = std::max({std::abs(lhs), std::abs(rhs), biggest});
  return out;
}

Eigen::MatrixXcd gram_discrete(std::span<const SpectralPoint> points, const ModelParams& p) {
  std::vector<FockVector> waves;
  waves.reserve(points.size());
  for (const SpectralPoint& pt : points) waves.push_back(wave_by_branching(SpectralVariables::from_xi(pt.xi), p));
  return gram(waves, p.t);
}

}  // namespace qbethe
