#include "qbethe/continuum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "qbethe/hall_littlewood.hpp"

namespace qbethe {

void ExponentialSum::add(cplx coeff, std::vector<double> freq) {
  if (static_cast<int>(freq.size()) != dim_) throw std::invalid_argument("ExponentialSum: frequency dimension");
  terms_.push_back({coeff, std::move(freq)});
}

cplx ExponentialSum::evaluate(std::span<const double> x) const {
  cplx total = 0.0;
  for (const ExponentialTerm& term : terms_) {
    const double phase = std::inner_product(term.freq.begin(), term.freq.end(), x.begin(), 0.0);
    total += term.coeff * std::exp(cplx(0.0, phase));
  }
  return total;
}

cplx ExponentialSum::derivative(int j, std::span<const double> x) const {
  cplx total = 0.0;
  for (const ExponentialTerm& term : terms_) {
    const double phase = std::inner_product(term.freq.begin(), term.freq.end(), x.begin(), 0.0);
    total += cplx(0.0, term.freq[static_cast<std::size_t>(j)]) * term.coeff * std::exp(cplx(0.0, phase));
  }
  return total;
}

ExponentialSum ExponentialSum::conjugate() const {
  ExponentialSum out(dim_);
  for (const ExponentialTerm& term : terms_) {
    std::vector<double> k = term.freq;
    for (double& v : k) v = -v;
    out.add(std::conj(term.coeff), std::move(k));
  }
  return out;
}

double ExponentialSum::coefficient_norm() const {
  double s = 0.0;
  for (const ExponentialTerm& term : terms_) s += std::abs(term.coeff);
  return s;
}

ExponentialSum operator*(const ExponentialSum& a, const ExponentialSum& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("ExponentialSum: dimension mismatch");
  ExponentialSum out(a.dim_);
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const ExponentialTerm& x : a.terms_) {
    for (const ExponentialTerm& y : b.terms_) {
      std::vector<double> k(x.freq.size());
      for (std::size_t j = 0; j < k.size(); ++j) k[j] = x.freq[j] + y.freq[j];
      out.terms_.push_back({x.coeff * y.coeff, std::move(k)});
    }
  }
  return out;
}

ExponentialSum operator+(const ExponentialSum& a, const ExponentialSum& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("ExponentialSum: dimension mismatch");
  ExponentialSum out = a;
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  return out;
}

ExponentialSum continuum_wave_sum(std::span<const double> xi, const ContinuumParams& cp, double singularity_floor) {
  const int n = static_cast<int>(xi.size());
  if (n < 1) throw std::invalid_argument("continuum_wave_sum: empty xi");
  const cplx i(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    const double a = xi[static_cast<std::size_t>(j)];
    guard_denominator(a, singularity_floor, "xi_j");
    for (int k = j + 1; k < n; ++k) {
      const double b = xi[static_cast<std::size_t>(k)];
      guard_denominator(a + b, singularity_floor, "xi_j + xi_k");
      guard_denominator(a - b, singularity_floor, "xi_j - xi_k");
    }
  }
  ExponentialSum out(n);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> w(static_cast<std::size_t>(n));
  do {
    for (unsigned signs = 0; signs < (1U << n); ++signs) {
      for (int j = 0; j < n; ++j) {
        const double x = xi[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
        w[static_cast<std::size_t>(j)] = (signs >> j) & 1U ? -x : x;
      }
      cplx c = 1.0;
      for (int j = 0; j < n; ++j) {
        const double a = w[static_cast<std::size_t>(j)];
        c *= (a - i * cp.g_minus) / a;
        for (int k = j + 1; k < n; ++k) {
          const double b = w[static_cast<std::size_t>(k)];
          c *= (a + b - i * cp.g) / (a + b) * (a - b - i * cp.g) / (a - b);
        }
      }
      out.add(c, w);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

cplx continuum_wave(std::span<const double> xi, std::span<const double> x, const ContinuumParams& cp,
                    double singularity_floor) {
  if (x.size() != xi.size()) throw std::invalid_argument("continuum_wave: x and xi differ in length");
  return continuum_wave_sum(xi, cp, singularity_floor).evaluate(x);
}

bool in_alcove(std::span<const double> x) {
  double prev = 0.5;
  for (double v : x) {
    if (!(v < prev)) return false;
    prev = v;
  }
  return x.empty() || prev > 0.0;
}

std::vector<Wall> alcove_walls(int n) {
  std::vector<Wall> out;
  out.push_back({WallKind::affine, 0});
  for (int j = 0; j + 1 < n; ++j) out.push_back({WallKind::pair, j});
  out.push_back({WallKind::origin, n - 1});
  return out;
}

double robin_residual(std::span<const double> xi, const ContinuumParams& cp, Wall wall, std::span<const double> sample) {
  const int n = static_cast<int>(xi.size());
  if (static_cast<int>(sample.size()) != n) throw std::invalid_argument("robin_residual: sample dimension");
  std::vector<double> x(sample.begin(), sample.end());
  const ExponentialSum psi = continuum_wave_sum(xi, cp);
  switch (wall.kind) {
    case WallKind::pair: {
      const int j = wall.index;
      if (j < 0 || j + 1 >= n) throw std::invalid_argument("robin_residual: pair wall index out of range");
      x[static_cast<std::size_t>(j + 1)] = x[static_cast<std::size_t>(j)];
      return std::abs(psi.derivative(j, x) - psi.derivative(j + 1, x) - cp.g * psi.evaluate(x));
    }
    case WallKind::origin:
      x.back() = 0.0;
      return std::abs(psi.derivative(n - 1, x) - cp.g_minus * psi.evaluate(x));
    case WallKind::affine:
      x.front() = 0.5;
      return std::abs(psi.derivative(0, x) + cp.g_plus * psi.evaluate(x));
  }
  return 0.0;
}

double wave_sup_norm(std::span<const double> xi, const ContinuumParams& cp, int points_per_axis) {
  const int n = static_cast<int>(xi.size());
  if (points_per_axis < 2) throw std::invalid_argument("wave_sup_norm: need at least two points per axis");
  const ExponentialSum psi = continuum_wave_sum(xi, cp);
  const double h = 0.5 / (points_per_axis - 1);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> x(static_cast<std::size_t>(n));
  double best = 0.0;
  // odometer over weakly decreasing index tuples
  while (true) {
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = h * idx[static_cast<std::size_t>(j)];
    best = std::max(best, std::abs(psi.evaluate(x)));
    int pos = n - 1;
    while (pos >= 0) {
      const int cap = pos == 0 ? points_per_axis - 1 : idx[static_cast<std::size_t>(pos - 1)];
      if (idx[static_cast<std::size_t>(pos)] < cap) {
        ++idx[static_cast<std::size_t>(pos)];
        for (int k = pos + 1; k < n; ++k) idx[static_cast<std::size_t>(k)] = 0;
        break;
      }
      --pos;
    }
    if (pos < 0) break;
  }
  return best;
}

namespace {

// c * y^power * exp(i freq y) in the current integration variable
struct PolyExp {
  cplx coeff;
  int power;
  double freq;
};

constexpr double taylor_threshold = 1e-8;

// Antiderivative of y^p e^{iKy} from 0 to y, as PolyExp terms in y.
void integrate_from_zero(const PolyExp& term, std::vector<PolyExp>& out) {
  const int p = term.power;
  const double k = term.freq;
  if (std::abs(k) < taylor_threshold) {
    cplx ik_pow = 1.0;
    double fact = 1.0;
    for (int r = 0; r <= 3; ++r) {
      if (r > 0) {
        ik_pow *= cplx(0.0, k);
        fact *= r;
      }
      out.push_back({term.coeff * ik_pow / (fact * (p + r + 1)), p + r + 1, 0.0});
    }
    return;
  }
  const cplx ik(0.0, k);
  double falling = 1.0;  // p! / (p - r)!
  cplx ik_pow = ik;      // (iK)^{r+1}
  for (int r = 0; r <= p; ++r) {
    if (r > 0) {
      falling *= p - r + 1;
      ik_pow *= ik;
    }
    const double sign = r % 2 == 0 ? 1.0 : -1.0;
    out.push_back({term.coeff * sign * falling / ik_pow, p - r, k});
  }
  const double sign = p % 2 == 0 ? 1.0 : -1.0;
  out.push_back({-term.coeff * sign * falling / ik_pow, 0, 0.0});
}

}  // namespace

cplx alcove_integral(const ExponentialSum& es) {
  const int n = es.dim();
  if (n < 1 || n > 5) throw std::invalid_argument("alcove_integral: need 1 <= n <= 5");
  cplx total = 0.0;
  std::vector<PolyExp> cur;
  std::vector<PolyExp> next;
  for (const ExponentialTerm& term : es.terms()) {
    cur.assign(1, PolyExp{term.coeff, 0, term.freq.back()});
    for (int level = n - 1; level >= 0; --level) {
      next.clear();
      for (const PolyExp& pe : cur) integrate_from_zero(pe, next);
      std::swap(cur, next);
      if (level > 0) {
        for (PolyExp& pe : cur) pe.freq += term.freq[static_cast<std::size_t>(level - 1)];
      }
    }
    for (const PolyExp& pe : cur) total += pe.coeff * std::pow(0.5, pe.power) * std::exp(cplx(0.0, 0.5 * pe.freq));
  }
  return total;
}

namespace {

std::vector<std::vector<double>> continuum_points(std::span<const Partition> lambdas, const ContinuumParams& cp) {
  std::vector<std::vector<double>> out;
  for (const Partition& lam : lambdas) out.push_back(solve_spectral_point(MorseProblem::continuum(cp, lam)).xi);
  return out;
}

}  // namespace

Eigen::MatrixXcd gram_continuum(std::span<const Partition> lambdas, const ContinuumParams& cp) {
  if (cp.n > 4) throw std::invalid_argument("gram_continuum: n <= 4 required");
  const auto points = continuum_points(lambdas, cp);
  std::vector<ExponentialSum> sums;
  for (const auto& xi : points) sums.push_back(continuum_wave_sum(xi, cp));
  const auto k = static_cast<std::ptrdiff_t>(lambdas.size());
  Eigen::MatrixXcd g(k, k);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < k; ++r) {
    for (std::ptrdiff_t c = r; c < k; ++c) {
      g(r, c) = alcove_integral(sums[static_cast<std::size_t>(r)] * sums[static_cast<std::size_t>(c)].conjugate());
    }
  }
  for (std::ptrdiff_t r = 0; r < k; ++r) {
    g(r, r) = g(r, r).real();
    for (std::ptrdiff_t c = 0; c < r; ++c) g(r, c) = std::conj(g(c, r));
  }
  return g;
}

Eigen::MatrixXcd gram_continuum_quadrature(std::span<const Partition> lambdas, const ContinuumParams& cp) {
  if (cp.n != 2) throw std::invalid_argument("gram_continuum_quadrature: n = 2 only");
  const auto points = continuum_points(lambdas, cp);
  std::vector<ExponentialSum> sums;
  for (const auto& xi : points) sums.push_back(continuum_wave_sum(xi, cp));
  using rule = boost::math::quadrature::gauss<double, 64>;
  const auto k = static_cast<Eigen::Index>(lambdas.size());
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(k, k);
  // x1 in (0, 1/2), x2 = s x1 with s in (0, 1)
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      const ExponentialSum& a = sums[static_cast<std::size_t>(r)];
      const ExponentialSum& b = sums[static_cast<std::size_t>(c)];
      auto inner = [&](double x1) {
        auto f = [&](double s) {
          const std::array<double, 2> x{x1, s * x1};
          return a.evaluate(x) * std::conj(b.evaluate(x));
        };
        const double re = rule::integrate([&](double s) { return f(s).real(); }, 0.0, 1.0);
        const double im = rule::integrate([&](double s) { return f(s).imag(); }, 0.0, 1.0);
        return cplx(re, im) * x1;
      };
      const double re = rule::integrate([&](double x1) { return inner(x1).real(); }, 0.0, 0.5);
      const double im = rule::integrate([&](double x1) { return inner(x1).imag(); }, 0.0, 0.5);
      g(r, c) = cplx(re, im);
    }
  }
  return g;
}

Partition floor_map(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<int> parts(static_cast<std::size_t>(n), 0);
  int running = 0;
  for (int j = n - 1; j >= 0; --j) {
    const double next = j + 1 < n ? x[static_cast<std::size_t>(j + 1)] : 0.0;
    const double diff = x[static_cast<std::size_t>(j)] - next;
    if (diff < 0.0) throw std::invalid_argument("floor_map: x outside the closed chamber");
    running += static_cast<int>(std::floor(diff));
    parts[static_cast<std::size_t>(j)] = running;
  }
  return Partition(std::move(parts));
}

namespace {

bool in_closed_chamber(std::span<const double> x) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double next = j + 1 < x.size() ? x[j + 1] : 0.0;
    if (x[j] < next) return false;
  }
  return true;
}

std::vector<double> scaled(std::span<const double> x, int m) {
  std::vector<double> y(x.begin(), x.end());
  for (double& v : y) v *= 2.0 * m;
  return y;
}

}  // namespace

cplx staircase_embed(const FockVector& f, double t, std::span<const double> x) {
  const int m = f.sector().m();
  if (static_cast<int>(x.size()) != f.sector().n()) throw std::invalid_argument("staircase_embed: dimension");
  if (!in_closed_chamber(x)) return 0.0;
  const Partition lam = floor_map(scaled(x, m));
  if (!lam.fits(m)) return 0.0;
  return std::sqrt(weight_delta(lam, t)) * f.at(lam);
}

cplx staircase_wave(std::span<const double> lattice_xi, const ModelParams& p, std::span<const double> x) {
  const int n = static_cast<int>(lattice_xi.size());
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("staircase_wave: dimension");
  if (!in_closed_chamber(x)) return 0.0;
  const Partition lam = floor_map(scaled(x, p.m));
  if (!lam.fits(p.m)) return 0.0;
  std::vector<cplx> z;
  for (double v : lattice_xi) z.push_back(std::exp(cplx(0.0, v)));
  return std::ldexp(1.0, n) * std::sqrt(weight_delta(lam, p.t)) * hl_direct(lam, z, HLParams{p.t, p.a_minus, 0.0});
}

cplx staircase_inner_product(const FockVector& f, const FockVector& g, double t) {
  if (!(f.sector() == g.sector())) throw std::invalid_argument("staircase_inner_product: sector mismatch");
  const int n = f.sector().n();
  const int m = f.sector().m();
  // each cell {floor_map(2 m x) = l} is a unit cube in the difference coordinates of 2 m x
  const double cell = std::pow(2.0 * m, -n);
  cplx total = 0.0;
  for (std::size_t i = 0; i < f.sector().size(); ++i) {
    total += cell * weight_delta(f.sector()[i], t) * f[i] * std::conj(g[i]);
  }
  return total;
}

ModelParams continuum_limit_params(const ContinuumParams& cp, int m) {
  cp.validate();
  if (m < 1) throw std::invalid_argument("continuum_limit_params: m >= 1 required");
  const double t = std::exp(-cp.g / (2.0 * m));
  return ModelParams::make(m, cp.n, std::sqrt(t), std::exp(-cp.g_plus / (2.0 * m)), std::exp(-cp.g_minus / (2.0 * m)));
}

std::vector<double> default_sample(int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = 0.3 * (n - j) / n;
  return x;
}

namespace {

SweepRow sweep_row(const Partition& lambda, const ContinuumParams& cp, int m, std::span<const double> continuum_xi,
                   std::span<const double> sample) {
  const ModelParams p = continuum_limit_params(cp, m);
  const SpectralPoint pt = solve_spectral_point(MorseProblem::lattice(p, lambda));
  SweepRow row;
  row.m = m;
  row.iterations = pt.iterations;
  for (std::size_t j = 0; j < pt.xi.size(); ++j) {
    row.scaled_xi.push_back(2.0 * m * pt.xi[j]);
    row.xi_deviation = std::max(row.xi_deviation, std::abs(row.scaled_xi.back() - continuum_xi[j]));
  }
  const FockVector psi = wave_by_branching(SpectralVariables::from_xi(pt.xi), p);
  row.staircase_norm = std::ldexp(1.0, 2 * cp.n) * staircase_inner_product(psi, psi, p.t).real();
  row.staircase_value = staircase_wave(pt.xi, p, sample);
  return row;
}

SweepReport sweep(const Partition& lambda, const ContinuumParams& cp, std::span<const int> m_list,
                  std::span<const double> sample, bool parallel) {
  if (!std::is_sorted(m_list.begin(), m_list.end())) throw std::invalid_argument("convergence_sweep: m list must increase");
  SweepReport rep;
  rep.lambda = lambda;
  rep.params = cp;
  rep.sample = sample.empty() ? default_sample(cp.n) : std::vector<double>(sample.begin(), sample.end());
  if (static_cast<int>(rep.sample.size()) != cp.n) throw std::invalid_argument("convergence_sweep: sample dimension");
  rep.continuum_xi = solve_spectral_point(MorseProblem::continuum(cp, lambda)).xi;
  const ExponentialSum psi = continuum_wave_sum(rep.continuum_xi, cp);
  rep.continuum_norm = alcove_integral(psi * psi.conjugate()).real();
  rep.continuum_value = psi.evaluate(rep.sample);
  rep.rows.resize(m_list.size());
  std::vector<std::string> errors(m_list.size());
  const auto count = static_cast<std::ptrdiff_t>(m_list.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      rep.rows[idx] = sweep_row(lambda, cp, m_list[idx], rep.continuum_xi, rep.sample);
    } catch (const std::exception& e) {
      errors[idx] = "m=" + std::to_string(m_list[idx]) + ": " + e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::runtime_error("convergence_sweep: " + e);
  }
  return rep;
}

}  // namespace

SweepReport convergence_sweep(const Partition& lambda, const ContinuumParams& cp, std::span<const int> m_list,
                              std::span<const double> sample) {
  return sweep(lambda, cp, m_list, sample, true);
}

SweepReport convergence_sweep_serial(const Partition& lambda, const ContinuumParams& cp, std::span<const int> m_list,
                                     std::span<const double> sample) {
  return sweep(lambda, cp, m_list, sample, false);
}

}  // namespace qbethe
