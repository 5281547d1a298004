#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "qbethe/bethe.hpp"
#include "support.hpp"

using namespace qbethe;
using namespace qbethe::testing;

namespace {

constexpr double pi = std::numbers::pi;

// v_a as the integral of the Poisson kernel.
double v_integral(double theta, double a) {
  auto kernel = [a](double u) { return (1.0 - a * a) / (1.0 - 2.0 * a * std::cos(u) + a * a); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(kernel, 0.0, theta, 12, 1e-14);
}

// Critical-point equations written from the definitions, lattice flavour.
std::vector<double> lattice_gradient_oracle(const ModelParams& p, const Partition& lam, const std::vector<double>& xi) {
  const int n = lam.length();
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double x = xi[static_cast<std::size_t>(j)];
    double s = 2.0 * (p.m + 1) * x + v_integral(x, p.a_plus) + v_integral(x, p.a_minus);
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double y = xi[static_cast<std::size_t>(k)];
      s += v_integral(y + x, p.t) - v_integral(y - x, p.t);
    }
    g[static_cast<std::size_t>(j)] = s - 2.0 * pi * (n - j + lam[j]);
  }
  return g;
}

std::vector<double> continuum_gradient_oracle(const ContinuumParams& c, const Partition& lam, const std::vector<double>& xi) {
  const int n = lam.length();
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double x = xi[static_cast<std::size_t>(j)];
    double s = x + 2.0 * std::atan(x / c.g_plus) + 2.0 * std::atan(x / c.g_minus);
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double y = xi[static_cast<std::size_t>(k)];
      s += 2.0 * (std::atan((y + x) / c.g) - std::atan((y - x) / c.g));
    }
    g[static_cast<std::size_t>(j)] = s - 2.0 * pi * (n - j + lam[j]);
  }
  return g;
}

// Closed-form continuum Morse function; the arctan antiderivative is elementary.
double continuum_value_oracle(const ContinuumParams& c, const Partition& lam, const std::vector<double>& xi) {
  auto anti = [](double u, double g) { return u * std::atan(u / g) - 0.5 * g * std::log1p(u * u / (g * g)); };
  const int n = lam.length();
  double v = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = xi[static_cast<std::size_t>(j)];
    v += 0.5 * x * x - 2.0 * pi * (n - j + lam[j]) * x + 2.0 * (anti(x, c.g_plus) + anti(x, c.g_minus));
    for (int k = j + 1; k < n; ++k) {
      const double y = xi[static_cast<std::size_t>(k)];
      v += 2.0 * (anti(x + y, c.g) + anti(x - y, c.g));
    }
  }
  return v;
}

double lattice_bae_oracle(const ModelParams& p, const std::vector<double>& xi) {
  double worst = 0.0;
  const std::size_t n = xi.size();
  for (std::size_t j = 0; j < n; ++j) {
    const cplx e = std::exp(cplx(0.0, xi[j]));
    const cplx lhs = std::exp(cplx(0.0, 2.0 * (p.m + 1) * xi[j]));
    cplx rhs = (1.0 - p.a_plus * e) / (e - p.a_plus) * (1.0 - p.a_minus * e) / (e - p.a_minus);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const cplx sp = std::exp(cplx(0.0, xi[j] + xi[k]));
      const cplx sm = std::exp(cplx(0.0, xi[j] - xi[k]));
      rhs *= (1.0 - p.t * sp) / (sp - p.t) * (1.0 - p.t * sm) / (sm - p.t);
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double continuum_bae_oracle(const ContinuumParams& c, const std::vector<double>& xi) {
  double worst = 0.0;
  const cplx i(0.0, 1.0);
  const std::size_t n = xi.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double x = xi[j];
    cplx rhs = (i * c.g_plus + x) / (i * c.g_plus - x) * (i * c.g_minus + x) / (i * c.g_minus - x);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const double y = xi[k];
      rhs *= (i * c.g + x + y) / (i * c.g - x - y) * (i * c.g + x - y) / (i * c.g - x + y);
    }
    worst = std::max(worst, std::abs(std::exp(i * x) - rhs));
  }
  return worst;
}

double kappa_lattice(const ModelParams& p, int n, double sign) {
  auto term = [sign](double a) { return (1.0 - a * a) / ((1.0 + sign * std::abs(a)) * (1.0 + sign * std::abs(a))); };
  return 0.5 * (term(p.a_plus) + term(p.a_minus)) + (n - 1) * (1.0 - p.t * p.t) / ((1.0 + sign * p.t) * (1.0 + sign * p.t));
}

}  // namespace

TEST_CASE("v_a: exponential form, oddness, quasi-periodicity, monotonicity") {
  for (double a : {-0.9, -0.4, 0.0, 0.3, 0.95}) {
    double prev = -1e300;
    for (double th = -9.0; th <= 9.0; th += 0.173) {
      const double v = v_a(th, a);
      const cplx e = std::exp(cplx(0.0, th));
      CHECK(std::abs(std::exp(cplx(0.0, -v)) - (1.0 - a * e) / (e - a)) <= 1e-12);
      CHECK(v_a(-th, a) == doctest::Approx(-v).epsilon(1e-13));
      CHECK(v_a(th + 2 * pi, a) == doctest::Approx(v + 2 * pi).epsilon(1e-13));
      CHECK(v > prev);
      prev = v;
      const double h = 1e-5;
      CHECK(v_a_prime(th, a) == doctest::Approx((v_a(th + h, a) - v_a(th - h, a)) / (2 * h)).epsilon(1e-6));
    }
    // no jump across the pole of the half-angle tangent
    CHECK(std::abs(v_a(pi + 1e-9, a) - v_a(pi - 1e-9, a)) <= 1e-6);
    CHECK(v_a(pi, a) == doctest::Approx(pi).epsilon(1e-13));
  }
  for (double th : {0.4, 1.7, 3.0}) CHECK(v_a(th, -0.4) == doctest::Approx(v_integral(th, -0.4)).epsilon(1e-12));
}

TEST_CASE("lattice gradient and Hessian against the definitions") {
  const ModelParams p = ModelParams::defaults(3, 2);
  const Partition lam{2, 1};
  const auto prob = MorseProblem::lattice(p, lam);
  const std::vector<double> xi{1.9, 0.7};
  const Eigen::VectorXd g = morse_gradient(prob, xi);
  const auto oracle = lattice_gradient_oracle(p, lam, xi);
  for (int j = 0; j < 2; ++j) CHECK(g(j) == doctest::Approx(oracle[static_cast<std::size_t>(j)]).epsilon(1e-11));
  const Eigen::MatrixXd h = morse_hessian(prob, xi);
  const double step = 1e-6;
  for (int k = 0; k < 2; ++k) {
    std::vector<double> up = xi;
    std::vector<double> dn = xi;
    up[static_cast<std::size_t>(k)] += step;
    dn[static_cast<std::size_t>(k)] -= step;
    const Eigen::VectorXd fd = (morse_gradient(prob, up) - morse_gradient(prob, dn)) / (2 * step);
    for (int j = 0; j < 2; ++j) CHECK(h(j, k) == doctest::Approx(fd(j)).epsilon(1e-7));
    // and the gradient is the derivative of the Morse value
    const double dv = (morse_value(prob, up) - morse_value(prob, dn)) / (2 * step);
    CHECK(g(k) == doctest::Approx(dv).epsilon(1e-6));
  }
  CHECK(h.llt().info() == Eigen::Success);
}

TEST_CASE("continuum Morse value, gradient and Hessian against closed forms") {
  const ContinuumParams c = ContinuumParams::make(3, 1.3, 0.7, 2.1);
  const Partition lam{2, 0, 0};
  const auto prob = MorseProblem::continuum(c, lam);
  const std::vector<double> xi{15.0, 7.5, 2.5};
  CHECK(morse_value(prob, xi) == doctest::Approx(continuum_value_oracle(c, lam, xi)).epsilon(1e-10));
  const Eigen::VectorXd g = morse_gradient(prob, xi);
  const auto oracle = continuum_gradient_oracle(c, lam, xi);
  for (int j = 0; j < 3; ++j) CHECK(g(j) == doctest::Approx(oracle[static_cast<std::size_t>(j)]).epsilon(1e-12));
  const Eigen::MatrixXd h = morse_hessian(prob, xi);
  const double step = 1e-6;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> up = xi;
    std::vector<double> dn = xi;
    up[static_cast<std::size_t>(k)] += step;
    dn[static_cast<std::size_t>(k)] -= step;
    const auto gu = continuum_gradient_oracle(c, lam, up);
    const auto gd = continuum_gradient_oracle(c, lam, dn);
    for (int j = 0; j < 3; ++j) {
      CHECK(h(j, k) == doctest::Approx((gu[static_cast<std::size_t>(j)] - gd[static_cast<std::size_t>(j)]) / (2 * step)).epsilon(1e-7));
    }
  }
}

TEST_CASE("lattice spectral points on the (2,3) sector") {
  const ModelParams p = ModelParams::defaults(3, 2);
  const auto pts = solve_sector(p);
  REQUIRE(pts.size() == 10);
  const auto [km, kp] = std::pair{kappa_lattice(p, 2, -1.0), kappa_lattice(p, 2, 1.0)};
  const auto [lib_km, lib_kp] = bound_constants(MorseProblem::lattice(p, Partition{0, 0}));
  CHECK(lib_km == doctest::Approx(km).epsilon(1e-14));
  CHECK(lib_kp == doctest::Approx(kp).epsilon(1e-14));
  for (const SpectralPoint& pt : pts) {
    const auto prob = MorseProblem::lattice(p, pt.lambda);
    CHECK(pt.iterations <= 30);
    CHECK(pt.grad_norm <= 1e-12);
    CHECK(lattice_bae_oracle(p, pt.xi) <= 1e-10);
    CHECK(bae_residual(prob, pt.xi) == doctest::Approx(lattice_bae_oracle(p, pt.xi)).epsilon(1e-3).scale(1e-12));
    CHECK(check_bounds(prob, pt.xi).all());
    CHECK(pt.xi[0] > pt.xi[1]);
    CHECK(pt.xi[1] > 0.0);
    CHECK(pt.xi[0] < pi);
    for (int j = 0; j < 2; ++j) {
      const double r = pi * (2 - j + pt.lambda[j]);
      CHECK(pt.xi[static_cast<std::size_t>(j)] > r / (p.m + 1 + km));
      CHECK(pt.xi[static_cast<std::size_t>(j)] < r / (p.m + 1 + kp));
    }
    const double gap = pi * (1 + pt.lambda[0] - pt.lambda[1]);
    CHECK(pt.xi[0] - pt.xi[1] > gap / (p.m + 1 + km));
    CHECK(pt.xi[0] - pt.xi[1] < gap / (p.m + 1 + kp));
  }
}

TEST_CASE("property: spectral points are injective in lambda") {
  const auto pts = solve_sector(ModelParams::defaults(3, 2));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = std::max(std::abs(pts[i].xi[0] - pts[j].xi[0]), std::abs(pts[i].xi[1] - pts[j].xi[1]));
      CHECK(d > 1e-6);
    }
  }
}

TEST_CASE("small coupling limit of the lattice spectral points") {
  const ModelParams p = ModelParams::make(3, 2, 1e-4, 1e-8, 1e-8);
  for (const SpectralPoint& pt : solve_sector(p)) {
    for (int j = 0; j < 2; ++j) {
      const double limit = pi * (2 - j + pt.lambda[j]) / (p.m + p.n + 1);
      CHECK(std::abs(pt.xi[static_cast<std::size_t>(j)] - limit) <= 1e-6);
    }
  }
}

TEST_CASE("property: spectral points depend continuously on the couplings") {
  const ModelParams p = ModelParams::defaults(3, 2);
  const ModelParams near = ModelParams::make(3, 2, 0.6 + 1e-4, 0.3 + 1e-4, -0.4 - 1e-4);
  const auto a = solve_sector(p);
  const auto b = solve_sector(near);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(a[i].xi[j] - b[i].xi[j]) < 1e-3);
  }
}

TEST_CASE("continuum spectral points") {
  const ContinuumParams c = ContinuumParams::make(3, 1.0, 1.0, 1.0);
  const double kappa = 2.0 * (1.0 / c.g_plus + 1.0 / c.g_minus + 2.0 * (c.n - 1) / c.g);
  for (const Partition& lam : leading_partitions(3, 10)) {
    const auto prob = MorseProblem::continuum(c, lam);
    const SpectralPoint pt = solve_spectral_point(prob);
    CHECK(pt.flavor == Flavor::continuum);
    CHECK(continuum_bae_oracle(c, pt.xi) <= 1e-10);
    CHECK(check_bounds(prob, pt.xi).all());
    CHECK(bound_constants(prob).first == doctest::Approx(kappa));
    for (int j = 0; j < 3; ++j) {
      const double r = 2 * pi * (3 - j + lam[j]);
      CHECK(pt.xi[static_cast<std::size_t>(j)] > r / (1 + kappa));
      CHECK(pt.xi[static_cast<std::size_t>(j)] < r);
      for (int k = j + 1; k < 3; ++k) {
        const double gap = 2 * pi * (k - j + lam[j] - lam[k]);
        const double d = pt.xi[static_cast<std::size_t>(j)] - pt.xi[static_cast<std::size_t>(k)];
        CHECK(d > gap / (1 + kappa));
        CHECK(d < gap);
      }
    }
  }
}

TEST_CASE("strong coupling drives continuum points to 2 pi (rho + lambda)") {
  const Partition lam{1, 0};
  double prev = 1e300;
  for (double g : {10.0, 100.0, 1000.0}) {
    const SpectralPoint pt = solve_spectral_point(MorseProblem::continuum(ContinuumParams::make(2, g, g, g), lam));
    const double dev = std::max(std::abs(pt.xi[0] - 2 * pi * 3), std::abs(pt.xi[1] - 2 * pi * 1));
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 2 * pi * 0.05);
}

TEST_CASE("bound checks flag points outside the chamber") {
  const auto prob = MorseProblem::lattice(ModelParams::defaults(3, 2), Partition{1, 0});
  const std::vector<double> swapped{0.5, 1.5};
  const BoundCheck bc = check_bounds(prob, swapped);
  CHECK_FALSE(bc.chamber);
  CHECK(bc.min_margin < 0.0);
  CHECK(bae_residual(prob, swapped) > 1e-3);
}

TEST_CASE("Newton gives up with a SolverError carrying the last iterate") {
  const auto prob = MorseProblem::lattice(ModelParams::defaults(3, 2), Partition{3, 1});
  SolverOptions opts;
  opts.max_iterations = 1;
  opts.tolerance = 1e-15;
  try {
    (void)solve_spectral_point(prob, opts);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.xi.size() == 2);
    CHECK(e.iterations >= 1);
  }
}

TEST_CASE("initial guesses lie inside the chamber") {
  const auto lat = initial_guess(MorseProblem::lattice(ModelParams::defaults(3, 2), Partition{2, 2}));
  CHECK(lat[0] == doctest::Approx(pi * 4 / 6));
  CHECK(lat[1] == doctest::Approx(pi * 3 / 6));
  const auto prob = MorseProblem::continuum(ContinuumParams::make(2, 1, 1, 1), Partition{0, 0});
  const auto cont = initial_guess(prob);
  CHECK(cont[0] > cont[1]);
  CHECK(cont[1] > 0.0);
  CHECK(prob.shifted(0) == 2.0);
  CHECK(prob.shifted(1) == 1.0);
}

TEST_CASE("partitions outside the lattice are rejected") {
  CHECK_THROWS_AS(MorseProblem::lattice(ModelParams::defaults(3, 2), Partition{4, 0}), std::invalid_argument);
  CHECK_THROWS_AS(MorseProblem::lattice(ModelParams::defaults(3, 2), Partition{1}), std::invalid_argument);
}

TEST_CASE("leading partitions are ordered by size then reverse lexicographically") {
  const auto ls = leading_partitions(2, 7);
  const std::vector<Partition> expect{{0, 0}, {1, 0}, {2, 0}, {1, 1}, {3, 0}, {2, 1}, {4, 0}};
  CHECK(ls == expect);
  CHECK(leading_partitions(1, 3) == std::vector<Partition>{{0}, {1}, {2}});
}

TEST_CASE("Casoratian vanishes for equal arguments and is antisymmetric") {
  const std::vector<double> a{2.0, 0.8};
  const std::vector<double> b{1.7, 0.4};
  for (cplx u : {cplx(0.7), cplx(1.2, 0.3)}) {
    CHECK(std::abs(casoratian(u, a, a, 0.6)) <= 1e-14);
    CHECK(std::abs(casoratian(u, a, b, 0.6) + casoratian(u, b, a, 0.6)) <= 1e-13);
    CHECK(std::abs(casoratian(u, a, b, 0.6)) > 1e-6);
  }
}
