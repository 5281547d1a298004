#include "qbethe/transfer.hpp"

#include <cmath>
#include <numbers>

namespace qbethe {

int entry_charge(Entry which) {
  switch (which) {
    case Entry::A:
    case Entry::D:
      return 0;
    case Entry::B:
      return 1;
    case Entry::C:
      return -1;
  }
  return 0;
}

FockVector apply_periodic(Entry which, cplx u, const FockVector& f, double t) {
  if (u == cplx(0.0)) throw std::domain_error("apply_periodic: u = 0");
  const int n = f.sector().n();
  const int m = f.sector().m();
  FockVector out(enumerate_sector(n + entry_charge(which), m));
  const cplx u2 = u * u;
  for (std::size_t i = 0; i < out.sector().size(); ++i) {
    const Partition& lam = out.sector()[i];
    cplx acc = 0.0;
    if (which == Entry::A || which == Entry::B) {
      for (const Partition& mu : strips_below(lam, n)) {
        acc += ipow(u2, lam.total() - mu.total()) * phi_weight(lam, mu, t) * f.at(mu);
      }
      acc *= ipow(u, which == Entry::A ? -m - 1 : -m);
    } else {
      for (const Partition& mu : strips_above(lam, n, m)) {
        acc += ipow(u2, lam.total() - mu.total()) * psi_weight(mu, lam, t) * f.at(mu);
      }
      acc *= ipow(u, which == Entry::C ? m : m + 1);
    }
    out[i] = acc;
  }
  return out;
}

namespace {

// Both halves of a double-strip sum: first and second intermediate families.
struct StripSums {
  cplx first = 0.0;
  cplx second = 0.0;
};

// For target lambda, enumerate intermediates nu and sources mu following the
// pattern of each entry and hand (nu, mu, weight) to `visit`.
template <class Visit>
StripSums strip_sums(Entry which, const Partition& lam, int n, int m, double t, cplx z, Visit&& visit) {
  StripSums s;
  auto zpow = [z](int k) { return ipow(z, k); };
  switch (which) {
    case Entry::A:
      for (int pass = 0; pass < 2; ++pass) {
        const int len = pass == 0 ? n : n - 1;
        if (len < 0) continue;
        cplx& acc = pass == 0 ? s.first : s.second;
        for (const Partition& nu : strips_below(lam, len)) {
          const cplx outer = phi_weight(lam, nu, t) * zpow(lam.total() - nu.total());
          for (const Partition& mu : strips_above(nu, n, m)) {
            acc += visit(mu, outer * psi_weight(mu, nu, t) * zpow(mu.total() - nu.total()));
          }
        }
      }
      break;
    case Entry::B:
      for (int pass = 0; pass < 2; ++pass) {
        const int len = pass == 0 ? n + 1 : n;
        cplx& acc = pass == 0 ? s.first : s.second;
        for (const Partition& nu : strips_below(lam, len)) {
          const cplx outer = phi_weight(lam, nu, t) * zpow(lam.total() - nu.total());
          for (const Partition& mu : strips_below(nu, n)) {
            acc += visit(mu, outer * phi_weight(nu, mu, t) * zpow(mu.total() - nu.total()));
          }
        }
      }
      break;
    case Entry::C:
      for (int pass = 0; pass < 2; ++pass) {
        const int len = pass == 0 ? n : n - 1;
        cplx& acc = pass == 0 ? s.first : s.second;
        for (const Partition& nu : strips_above(lam, len, m)) {
          const cplx outer = psi_weight(nu, lam, t) * zpow(lam.total() - nu.total());
          for (const Partition& mu : strips_above(nu, n, m)) {
            acc += visit(mu, outer * psi_weight(mu, nu, t) * zpow(mu.total() - nu.total()));
          }
        }
      }
      break;
    case Entry::D:
      for (int pass = 0; pass < 2; ++pass) {
        const int len = pass == 0 ? n + 1 : n;
        cplx& acc = pass == 0 ? s.first : s.second;
        for (const Partition& nu : strips_above(lam, len, m)) {
          const cplx outer = psi_weight(nu, lam, t) * zpow(lam.total() - nu.total());
          for (const Partition& mu : strips_below(nu, n)) {
            acc += visit(mu, outer * phi_weight(nu, mu, t) * zpow(mu.total() - nu.total()));
          }
        }
      }
      break;
  }
  return s;
}

cplx combine(Entry which, const StripSums& s, cplx z, double a, int m, double t) {
  switch (which) {
    case Entry::A:
      return ipow(z, -m) * ((a - 1.0 / z) * s.first + (t * z - a) * s.second);
    case Entry::B:
      return (1.0 / z - a) * s.first + (a - t * z) * s.second;
    case Entry::C:
      return (a - 1.0 / z) * s.first + (t * z - a) * s.second;
    case Entry::D:
      return ipow(z, m) * ((1.0 / z - a) * s.first + (a - t * z) * s.second);
  }
  return 0.0;
}

// Target-sector vector of sum_mu X_{lambda,mu}(z) f(mu).
FockVector boundary_sums(Entry which, cplx z, double a, const FockVector& f, double t) {
  const int n = f.sector().n();
  const int m = f.sector().m();
  FockVector out(enumerate_sector(n + entry_charge(which), m));
  for (std::size_t i = 0; i < out.sector().size(); ++i) {
    const StripSums s = strip_sums(which, out.sector()[i], n, m, t, z,
                                   [&f](const Partition& mu, cplx w) { return w * f.at(mu); });
    out[i] = combine(which, s, z, a, m, t);
  }
  return out;
}

cplx boundary_prefactor(Entry which, cplx u, int n, const ModelParams& p) {
  const double q = p.q;
  const int m = p.m;
  switch (which) {
    case Entry::A:
      return ipow(q, -m - 1) * ipow(p.t, -n) / u;
    case Entry::B:
      return ipow(q, -m) * ipow(p.t, -n - 1);
    case Entry::C:
      return ipow(q, -m - 1) * ipow(p.t, -n);
    case Entry::D:
      return ipow(q, -m) * ipow(p.t, -n - 1) * u;
  }
  return 0.0;
}

void check_sites(const FockVector& f, const ModelParams& p) {
  if (f.sector().m() != p.m) throw std::invalid_argument("sector m differs from model m");
}

}  // namespace

cplx boundary_coeff(Entry which, const Partition& lambda, const Partition& mu, cplx z, double a, int m, double t) {
  const int n = mu.length();
  if (lambda.length() != n + entry_charge(which)) return 0.0;
  const StripSums s = strip_sums(which, lambda, n, m, t, z,
                                 [&mu](const Partition& cand, cplx w) { return cand == mu ? w : cplx(0.0); });
  return combine(which, s, z, a, m, t);
}

FockVector apply_boundary(Entry which, cplx u, double a, const FockVector& f, const ModelParams& p) {
  if (u == cplx(0.0)) throw std::domain_error("apply_boundary: u = 0");
  check_sites(f, p);
  FockVector out = boundary_sums(which, u * u, a, f, p.t);
  out.amplitudes() *= boundary_prefactor(which, u, f.sector().n(), p);
  return out;
}

FockVector apply_transfer(cplx u, const FockVector& f, const ModelParams& p) {
  if (u == cplx(0.0)) throw std::domain_error("apply_transfer: u = 0");
  check_sites(f, p);
  const cplx z = u * u;
  const int n = f.sector().n();
  const cplx pref = ipow(p.q, -p.m) * ipow(p.t, -n - 1);
  const FockVector from_a = boundary_sums(Entry::A, z, p.a_minus, f, p.t);
  const FockVector from_d = boundary_sums(Entry::D, z, p.a_minus, f, p.t);
  FockVector out(f.sector_ptr());
  out.amplitudes() = pref * ((p.a_plus - p.t / z) * from_a.amplitudes() + (p.a_plus - z) * from_d.amplitudes());
  return out;
}

cplx creation_normalization(cplx u, double q) { return q * laurent_s(q) * laurent_s(q * u * u); }

FockVector apply_creation(cplx u, double a, const FockVector& f, const ModelParams& p, double singularity_floor) {
  guard_denominator(p.q * u * u - 1.0, singularity_floor, "q u^2 - 1");
  guard_denominator(p.q * u * u + 1.0, singularity_floor, "q u^2 + 1");
  FockVector out = apply_boundary(Entry::B, u, a, f, p);
  out.amplitudes() *= ipow(p.q, p.m + 1) * ipow(p.t, f.sector().n()) / creation_normalization(u, p.q);
  return out;
}

FockVector apply_dhat(cplx u, double a, const FockVector& f, const ModelParams& p) {
  FockVector out = apply_boundary(Entry::D, u, a, f, p);
  out.amplitudes() += (laurent_s(p.q) / laurent_s(u * u)) * apply_boundary(Entry::A, u, a, f, p).amplitudes();
  return out;
}

FockOperator periodic_operator(Entry which, cplx u, int m, double t) {
  return FockOperator::from_action(m, entry_charge(which),
                                   [which, u, t](const FockVector& f) { return apply_periodic(which, u, f, t); });
}

FockOperator boundary_operator(Entry which, cplx u, double a, const ModelParams& p) {
  return FockOperator::from_action(p.m, entry_charge(which),
                                   [which, u, a, p](const FockVector& f) { return apply_boundary(which, u, a, f, p); });
}

FockOperator transfer_operator(cplx u, const ModelParams& p) {
  return FockOperator::from_action(p.m, 0, [u, p](const FockVector& f) { return apply_transfer(u, f, p); });
}

FockOperator creation_operator(cplx u, double a, const ModelParams& p) {
  return FockOperator::from_action(p.m, 1, [u, a, p](const FockVector& f) { return apply_creation(u, a, f, p); });
}

FockOperator dhat_operator(cplx u, double a, const ModelParams& p) {
  return FockOperator::from_action(p.m, 0, [u, a, p](const FockVector& f) { return apply_dhat(u, a, f, p); });
}

FockOperator hamiltonian_operator(const ModelParams& p) {
  return FockOperator::from_action(p.m, 0, [p](const FockVector& f) { return apply_hamiltonian(f, p); });
}

FockOperator number_operator(const ModelParams& p) {
  return FockOperator::sector_scalar(p.m, [p](int n) { return cplx(ipow(p.q, p.m + 1) * ipow(p.t, n)); });
}

OpMatrix2 lax_matrix(int site, cplx u, int m, double t) {
  return {FockOperator::scalar(m, 1.0 / u), (1.0 - t) * FockOperator::generator(Generator::create, site, m, t),
          FockOperator::generator(Generator::annihilate, site, m, t), FockOperator::scalar(m, u)};
}

OpMatrix2 lax_inverse(int site, cplx u, int m, double t) {
  const FockOperator t_minus = FockOperator::generator(Generator::t_power_minus, site, m, t);
  return {u * t_minus, (1.0 - 1.0 / t) * FockOperator::generator(Generator::create, site, m, t) * t_minus,
          -(FockOperator::generator(Generator::annihilate, site, m, t) * t_minus), (1.0 / (u * t)) * t_minus};
}

OpMatrix2 periodic_monodromy_lax(cplx u, int m, double t) {
  OpMatrix2 acc = lax_matrix(0, u, m, t);
  for (int l = 1; l <= m; ++l) acc = lax_matrix(l, u, m, t) * acc;
  return acc;
}

OpMatrix2 periodic_monodromy_inverse_lax(cplx u, int m, double t) {
  OpMatrix2 acc = lax_inverse(0, u, m, t);
  for (int l = 1; l <= m; ++l) acc = acc * lax_inverse(l, u, m, t);
  return acc;
}

OpMatrix2 boundary_monodromy_lax(cplx u, double a, const ModelParams& p) {
  const int m = p.m;
  const OpMatrix2 k{FockOperator::scalar(m, laurent_e(u, a)), FockOperator::zero(m, 1), FockOperator::zero(m, -1),
                    FockOperator::scalar(m, laurent_f(u, a, p.q))};
  return periodic_monodromy_lax(u, m, p.t) * k * periodic_monodromy_inverse_lax(1.0 / (p.q * u), m, p.t);
}

FockOperator transfer_lax(cplx u, const ModelParams& p) {
  const OpMatrix2 bm = boundary_monodromy_lax(u, p.a_minus, p);
  return laurent_f(1.0 / u, p.a_plus, p.q) * bm.a + laurent_e(1.0 / u, p.a_plus) * bm.d;
}

TransferEigenvalues bethe_eigenvalues(cplx u, std::span<const double> xi, const ModelParams& p,
                                      double singularity_floor) {
  if (u == cplx(0.0)) throw std::domain_error("bethe_eigenvalues: u = 0");
  const cplx z = u * u;
  guard_denominator(z * z - 1.0, singularity_floor, "u^4 - 1");
  for (double x : xi) {
    for (double sign : {1.0, -1.0}) {
      const cplx w = std::exp(cplx(0.0, sign * x));
      guard_denominator(z * w - 1.0, singularity_floor, "u^2 exp(+-i xi) - 1");
      guard_denominator(w - z, singularity_floor, "u^{-2} exp(+-i xi) - 1");
    }
  }
  const int n = static_cast<int>(xi.size());
  auto half = [&](cplx y) {
    cplx acc = ipow(y, -(p.m + 2)) * (1.0 - y * y / p.t) / (1.0 - y * y) * (1.0 - p.a_plus * y) * (1.0 - p.a_minus * y);
    for (double x : xi) {
      const cplx w = std::exp(cplx(0.0, x));
      acc *= (1.0 - p.t * y * w) * (1.0 - p.t * y / w) / ((1.0 - y * w) * (1.0 - y / w));
    }
    return acc;
  };
  double energy = 0.0;
  for (double x : xi) energy += 2.0 * std::cos(x);
  return {ipow(p.q, -p.m) * ipow(p.t, -n) * (half(z) + half(1.0 / z)), energy};
}

cplx transfer_eigenvalue_v(cplx u, std::span<const cplx> v, const ModelParams& p) {
  const double q = p.q;
  const int m = p.m;
  const cplx u2 = u * u;
  cplx first = ipow(u, -2 * m - 2) * laurent_s(u2 / q) / laurent_s(u2) * laurent_e(u, p.a_plus) * laurent_e(u, p.a_minus);
  cplx second = ipow(u, 2 * m + 2) * laurent_s(1.0 / (q * u2)) / laurent_s(1.0 / u2) * laurent_e(1.0 / u, p.a_plus) *
                laurent_e(1.0 / u, p.a_minus);
  for (const cplx& vj : v) {
    first *= laurent_s(q * u * vj) * laurent_s(q * u / vj) / (laurent_s(u * vj) * laurent_s(u / vj));
    second *= laurent_s(q * vj / u) * laurent_s(q / (u * vj)) / (laurent_s(vj / u) * laurent_s(1.0 / (u * vj)));
  }
  return ipow(q, -m - 1) * (first + second);
}

std::vector<Eigen::MatrixXcd> laurent_coefficients(const std::function<Eigen::MatrixXcd(cplx w)>& fn, int lowest,
                                                   int highest, double radius) {
  if (highest < lowest) throw std::invalid_argument("laurent_coefficients: empty range");
  const int count = highest - lowest + 1;
  std::vector<Eigen::MatrixXcd> coeffs(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const cplx w = std::polar(radius, 2.0 * std::numbers::pi * j / count);
    const Eigen::MatrixXcd sample = fn(w);
    for (int k = lowest; k <= highest; ++k) {
      auto& c = coeffs[static_cast<std::size_t>(k - lowest)];
      if (c.size() == 0) c = Eigen::MatrixXcd::Zero(sample.rows(), sample.cols());
      c += sample * (ipow(w, -k) / static_cast<double>(count));
    }
  }
  return coeffs;
}

}  // namespace qbethe
