#include "qbethe/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qbethe {

namespace {

constexpr double pi = std::numbers::pi;

double atan_integral_quad(double x, double g) {
  // int_0^x arctan(s/g) ds
  if (x == 0.0) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate([g](double s) { return std::atan(s / g); },
                                                                        0.0, x, 15, 1e-14);
}

double va_integral_quad(double x, double a) {
  if (x == 0.0) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate([a](double s) { return v_a(s, a); }, 0.0, x,
                                                                        15, 1e-14);
}

}  // namespace

std::string to_string(Flavor f) { return f == Flavor::lattice ? "lattice" : "continuum"; }

MorseProblem::MorseProblem(Flavor f, ModelParams lp, ContinuumParams cp, Partition lambda)
    : flavor_(f), lattice_(lp), continuum_(cp), lambda_(std::move(lambda)) {}

MorseProblem MorseProblem::lattice(const ModelParams& p, Partition lambda) {
  p.validate();
  if (lambda.length() != p.n || lambda.length() < 1) {
    throw std::invalid_argument("lattice lambda must have exactly n >= 1 parts");
  }
  if (!lambda.fits(p.m) || (lambda.length() > 0 && lambda[lambda.length() - 1] < 0)) {
    throw std::invalid_argument("lattice lambda must lie in Lambda_{n,m}");
  }
  return {Flavor::lattice, p, ContinuumParams{}, std::move(lambda)};
}

MorseProblem MorseProblem::continuum(const ContinuumParams& p, Partition lambda) {
  p.validate();
  if (lambda.length() != p.n) throw std::invalid_argument("continuum lambda must have exactly n parts");
  if (lambda[lambda.length() - 1] < 0) throw std::invalid_argument("continuum lambda parts must be >= 0");
  return {Flavor::continuum, ModelParams{}, p, std::move(lambda)};
}

double v_a(double theta, double a) {
  if (!(a > -1.0 && a < 1.0)) throw std::invalid_argument("v_a: a must lie in (-1,1)");
  const double k = std::round(theta / (2.0 * pi));
  const double r = theta - 2.0 * pi * k;
  return 2.0 * std::atan2((1.0 + a) * std::sin(r / 2.0), (1.0 - a) * std::cos(r / 2.0)) + 2.0 * pi * k;
}

double v_a_prime(double theta, double a) { return (1.0 - a * a) / (1.0 - 2.0 * a * std::cos(theta) + a * a); }

Eigen::VectorXd morse_gradient(const MorseProblem& prob, std::span<const double> xi) {
  const int n = prob.size();
  if (static_cast<int>(xi.size()) != n) throw std::invalid_argument("morse_gradient: xi has the wrong length");
  Eigen::VectorXd g(n);
  if (prob.flavor() == Flavor::lattice) {
    const ModelParams& p = prob.lattice_params();
    for (int j = 0; j < n; ++j) {
      const double x = xi[static_cast<std::size_t>(j)];
      double s = 2.0 * (p.m + 1) * x + v_a(x, p.a_plus) + v_a(x, p.a_minus);
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        const double y = xi[static_cast<std::size_t>(k)];
        s += v_a(y + x, p.t) - v_a(y - x, p.t);
      }
      g(j) = s - 2.0 * pi * prob.shifted(j);
    }
  } else {
    const ContinuumParams& p = prob.continuum_params();
    for (int j = 0; j < n; ++j) {
      const double x = xi[static_cast<std::size_t>(j)];
      double s = x + 2.0 * std::atan(x / p.g_plus) + 2.0 * std::atan(x / p.g_minus);
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        const double y = xi[static_cast<std::size_t>(k)];
        s += 2.0 * (std::atan((y + x) / p.g) - std::atan((y - x) / p.g));
      }
      g(j) = s - 2.0 * pi * prob.shifted(j);
    }
  }
  return g;
}

Eigen::MatrixXd morse_hessian(const MorseProblem& prob, std::span<const double> xi) {
  const int n = prob.size();
  if (static_cast<int>(xi.size()) != n) throw std::invalid_argument("morse_hessian: xi has the wrong length");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const bool lattice = prob.flavor() == Flavor::lattice;
  const ModelParams& lp = prob.lattice_params();
  const ContinuumParams& cp = prob.continuum_params();
  auto pair_term = [&](double x) { return lattice ? v_a_prime(x, lp.t) : 2.0 * cp.g / (cp.g * cp.g + x * x); };
  for (int j = 0; j < n; ++j) {
    const double x = xi[static_cast<std::size_t>(j)];
    double d = lattice ? 2.0 * (lp.m + 1) + v_a_prime(x, lp.a_plus) + v_a_prime(x, lp.a_minus)
                       : 1.0 + 2.0 * cp.g_plus / (cp.g_plus * cp.g_plus + x * x) +
                             2.0 * cp.g_minus / (cp.g_minus * cp.g_minus + x * x);
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double y = xi[static_cast<std::size_t>(k)];
      d += pair_term(x + y) + pair_term(x - y);
      if (k > j) {
        h(j, k) = pair_term(x + y) - pair_term(x - y);
        h(k, j) = h(j, k);
      }
    }
    h(j, j) = d;
  }
  return h;
}

double morse_value(const MorseProblem& prob, std::span<const double> xi) {
  const int n = prob.size();
  double v = 0.0;
  if (prob.flavor() == Flavor::lattice) {
    const ModelParams& p = prob.lattice_params();
    for (int j = 0; j < n; ++j) {
      const double x = xi[static_cast<std::size_t>(j)];
      v += (p.m + 1) * x * x - 2.0 * pi * prob.shifted(j) * x + va_integral_quad(x, p.a_plus) +
           va_integral_quad(x, p.a_minus);
      for (int k = j + 1; k < n; ++k) {
        const double y = xi[static_cast<std::size_t>(k)];
        v += va_integral_quad(x + y, p.t) + va_integral_quad(x - y, p.t);
      }
    }
  } else {
    const ContinuumParams& p = prob.continuum_params();
    for (int j = 0; j < n; ++j) {
      const double x = xi[static_cast<std::size_t>(j)];
      v += 0.5 * x * x - 2.0 * pi * prob.shifted(j) * x +
           2.0 * (atan_integral_quad(x, p.g_plus) + atan_integral_quad(x, p.g_minus));
      for (int k = j + 1; k < n; ++k) {
        const double y = xi[static_cast<std::size_t>(k)];
        v += 2.0 * (atan_integral_quad(x + y, p.g) + atan_integral_quad(x - y, p.g));
      }
    }
  }
  return v;
}

std::pair<double, double> bound_constants(const MorseProblem& prob) {
  const int n = prob.size();
  if (prob.flavor() == Flavor::continuum) {
    const ContinuumParams& p = prob.continuum_params();
    return {2.0 * (1.0 / p.g_plus + 1.0 / p.g_minus + 2.0 * (n - 1) / p.g), 0.0};
  }
  const ModelParams& p = prob.lattice_params();
  auto kappa = [&](double sign) {
    auto term = [sign](double a) { return (1.0 - a * a) / std::pow(1.0 + sign * std::abs(a), 2); };
    return 0.5 * (term(p.a_plus) + term(p.a_minus)) + (n - 1) * (1.0 - p.t * p.t) / std::pow(1.0 + sign * p.t, 2);
  };
  return {kappa(-1.0), kappa(1.0)};
}

std::vector<double> initial_guess(const MorseProblem& prob) {
  const int n = prob.size();
  std::vector<double> xi(static_cast<std::size_t>(n));
  if (prob.flavor() == Flavor::lattice) {
    const int m = prob.lattice_params().m;
    for (int j = 0; j < n; ++j) xi[static_cast<std::size_t>(j)] = pi * prob.shifted(j) / (m + n + 1);
  } else {
    const double kappa = bound_constants(prob).first;
    for (int j = 0; j < n; ++j) {
      const double top = 2.0 * pi * prob.shifted(j);
      xi[static_cast<std::size_t>(j)] = 0.5 * (top / (1.0 + kappa) + top);
    }
  }
  return xi;
}

SpectralPoint solve_spectral_point(const MorseProblem& prob, const SolverOptions& opts) {
  const int n = prob.size();
  std::vector<double> xi = initial_guess(prob);
  Eigen::VectorXd g = morse_gradient(prob, xi);
  double merit = g.squaredNorm();
  int it = 0;
  while (g.lpNorm<Eigen::Infinity>() > opts.tolerance) {
    if (it >= opts.max_iterations) {
      std::ostringstream os;
      os << "Newton did not converge in " << opts.max_iterations << " iterations (|grad| = "
         << g.lpNorm<Eigen::Infinity>() << ")";
      throw SolverError(os.str(), xi, g.lpNorm<Eigen::Infinity>(), it);
    }
    ++it;
    const Eigen::LLT<Eigen::MatrixXd> llt(morse_hessian(prob, xi));
    if (llt.info() != Eigen::Success) {
      throw SolverError("Hessian lost positive definiteness", xi, g.lpNorm<Eigen::Infinity>(), it);
    }
    const Eigen::VectorXd step = -llt.solve(g);
    // Armijo on |grad|^2, whose slope along the Newton step is -2 |grad|^2
    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> trial(xi.size());
    Eigen::VectorXd g_trial;
    for (int h = 0; h <= opts.max_halvings; ++h, alpha *= 0.5) {
      for (int j = 0; j < n; ++j) trial[static_cast<std::size_t>(j)] = xi[static_cast<std::size_t>(j)] + alpha * step(j);
      g_trial = morse_gradient(prob, trial);
      if (g_trial.squaredNorm() <= (1.0 - 1e-4 * 2.0 * alpha) * merit) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw SolverError("line search failed: no decrease of |grad|^2", xi, g.lpNorm<Eigen::Infinity>(), it);
    }
    xi = trial;
    g = g_trial;
    merit = g.squaredNorm();
  }
  return SpectralPoint{xi, prob.lambda(), g.lpNorm<Eigen::Infinity>(), it, prob.flavor()};
}

double bae_residual(const MorseProblem& prob, std::span<const double> xi) {
  const int n = prob.size();
  const cplx i(0.0, 1.0);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = xi[static_cast<std::size_t>(j)];
    cplx lhs;
    cplx rhs;
    if (prob.flavor() == Flavor::lattice) {
      const ModelParams& p = prob.lattice_params();
      const cplx e = std::exp(i * x);
      lhs = std::exp(2.0 * i * double(p.m + 1) * x);
      rhs = (1.0 - p.a_plus * e) / (e - p.a_plus) * (1.0 - p.a_minus * e) / (e - p.a_minus);
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        const double y = xi[static_cast<std::size_t>(k)];
        const cplx sp = std::exp(i * (x + y));
        const cplx df = std::exp(i * (x - y));
        rhs *= (1.0 - p.t * sp) / (sp - p.t) * (1.0 - p.t * df) / (df - p.t);
      }
    } else {
      const ContinuumParams& p = prob.continuum_params();
      lhs = std::exp(i * x);
      rhs = (i * p.g_plus + x) / (i * p.g_plus - x) * (i * p.g_minus + x) / (i * p.g_minus - x);
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        const double y = xi[static_cast<std::size_t>(k)];
        rhs *= (i * p.g + x + y) / (i * p.g - x - y) * (i * p.g + x - y) / (i * p.g - x + y);
      }
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

BoundCheck check_bounds(const MorseProblem& prob, std::span<const double> xi) {
  const int n = prob.size();
  BoundCheck out;
  out.chamber = true;
  out.alcove = true;
  out.moment_bounds = true;
  out.gap_bounds = true;
  double margin = std::numeric_limits<double>::infinity();
  // relative slack of lo < x < hi
  auto inside = [&margin](double lo, double x, double hi) {
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    margin = std::min({margin, (x - lo) / scale, (hi - x) / scale});
    return lo < x && x < hi;
  };
  const auto [k1, k2] = bound_constants(prob);
  const bool lattice = prob.flavor() == Flavor::lattice;
  const int m = lattice ? prob.lattice_params().m : 0;
  auto lo_of = [&](double s) { return lattice ? pi * s / (m + 1 + k1) : 2.0 * pi * s / (1.0 + k1); };
  auto hi_of = [&](double s) { return lattice ? pi * s / (m + 1 + k2) : 2.0 * pi * s; };
  for (int j = 0; j < n; ++j) {
    const double x = xi[static_cast<std::size_t>(j)];
    const double next = j + 1 < n ? xi[static_cast<std::size_t>(j + 1)] : 0.0;
    if (!(x > next)) out.chamber = false;
    margin = std::min(margin, (x - next) / std::max(std::abs(x), 1e-300));
    if (lattice && !(x < pi)) out.alcove = false;
    if (!inside(lo_of(prob.shifted(j)), x, hi_of(prob.shifted(j)))) out.moment_bounds = false;
    for (int k = j + 1; k < n; ++k) {
      const double s = prob.shifted(j) - prob.shifted(k);
      if (!inside(lo_of(s), x - xi[static_cast<std::size_t>(k)], hi_of(s))) out.gap_bounds = false;
    }
  }
  out.min_margin = margin;
  return out;
}

cplx casoratian(cplx u, std::span<const double> xi1, std::span<const double> xi2, double q) {
  if (u == cplx(0.0)) throw std::invalid_argument("casoratian: u must be nonzero");
  auto poly = [](std::span<const double> xi, cplx x) {
    const cplx z = x * x;
    cplx prod = 1.0;
    for (double s : xi) {
      const cplx v2 = std::exp(cplx(0.0, s));
      prod *= (z - v2) * (z - 1.0 / v2);
    }
    return prod;
  };
  return poly(xi1, q * u) * poly(xi2, u) - poly(xi1, u) * poly(xi2, q * u);
}

namespace {

std::vector<SpectralPoint> solve_all(const ModelParams& p, const SolverOptions& opts, bool parallel) {
  const SectorPtr sec = enumerate_sector(p.n, p.m);
  const auto count = static_cast<std::ptrdiff_t>(sec->size());
  std::vector<SpectralPoint> out(sec->size());
  std::vector<std::string> errors(sec->size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = solve_spectral_point(MorseProblem::lattice(p, (*sec)[idx]), opts);
    } catch (const std::exception& e) {
      errors[idx] = (*sec)[idx].to_string() + ": " + e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::runtime_error("solve_sector: " + e);
  }
  return out;
}

}  // namespace

std::vector<SpectralPoint> solve_sector(const ModelParams& p, const SolverOptions& opts) {
  return solve_all(p, opts, true);
}

std::vector<SpectralPoint> solve_sector_serial(const ModelParams& p, const SolverOptions& opts) {
  return solve_all(p, opts, false);
}

std::vector<Partition> leading_partitions(int n, int count) {
  if (n < 1 || count < 0) throw std::invalid_argument("leading_partitions: need n >= 1 and count >= 0");
  std::vector<Partition> out;
  for (int size = 0; static_cast<int>(out.size()) < count; ++size) {
    // partitions of `size` into at most n parts, reverse-lex
    std::vector<std::vector<int>> found;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int remaining, int cap) -> void {
      if (static_cast<int>(cur.size()) == n) {
        if (remaining == 0) found.push_back(cur);
        return;
      }
      for (int x = std::min(cap, remaining); x >= 0; --x) {
        cur.push_back(x);
        self(self, remaining - x, x);
        cur.pop_back();
      }
    };
    rec(rec, size, size);
    for (auto& v : found) {
      if (static_cast<int>(out.size()) == count) break;
      out.emplace_back(std::move(v));
    }
  }
  return out;
}

}  // namespace qbethe
