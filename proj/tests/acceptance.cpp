// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "qbethe/bethe.hpp"
#include "qbethe/continuum.hpp"
#include "qbethe/hall_littlewood.hpp"
#include "qbethe/kernels.hpp"
#include "qbethe/structure.hpp"
#include "qbethe/transfer.hpp"

using namespace qbethe;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double binomial(int a, int b) {
  double r = 1.0;
  for (int k = 1; k <= b; ++k) r = r * (a - b + k) / k;
  return r;
}

double lattice_bae(const ModelParams& p, const std::vector<double>& xi) {
  double worst = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const cplx e = std::exp(cplx(0.0, xi[j]));
    cplx rhs = (1.0 - p.a_plus * e) / (e - p.a_plus) * (1.0 - p.a_minus * e) / (e - p.a_minus);
    for (std::size_t k = 0; k < xi.size(); ++k) {
      if (k == j) continue;
      const cplx sp = std::exp(cplx(0.0, xi[j] + xi[k]));
      const cplx sm = std::exp(cplx(0.0, xi[j] - xi[k]));
      rhs *= (1.0 - p.t * sp) / (sp - p.t) * (1.0 - p.t * sm) / (sm - p.t);
    }
    worst = std::max(worst, std::abs(std::exp(cplx(0.0, 2.0 * (p.m + 1) * xi[j])) - rhs));
  }
  return worst;
}

double continuum_bae(const ContinuumParams& c, const std::vector<double>& xi) {
  const cplx i(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double x = xi[j];
    cplx rhs = (i * c.g_plus + x) / (i * c.g_plus - x) * (i * c.g_minus + x) / (i * c.g_minus - x);
    for (std::size_t k = 0; k < xi.size(); ++k) {
      if (k == j) continue;
      const double y = xi[k];
      rhs *= (i * c.g + x + y) / (i * c.g - x - y) * (i * c.g + x - y) / (i * c.g - x + y);
    }
    worst = std::max(worst, std::abs(std::exp(i * x) - rhs));
  }
  return worst;
}

double vec_rel(const FockVector& a, const FockVector& b) {
  return (a.amplitudes() - b.amplitudes()).norm() / std::max(a.amplitudes().norm(), b.amplitudes().norm());
}

Verdict sector_dimension() {
  Verdict v;
  int checked = 0;
  for (int n = 0; n <= 6; ++n) {
    for (int m = 0; m <= 6; ++m) {
      const auto want = static_cast<std::size_t>(binomial(n + m, n) + 0.5);
      v.require(enumerate_sector(n, m)->size() == want && sector_size(n, m) == want,
                "n=" + std::to_string(n) + " m=" + std::to_string(m));
      ++checked;
    }
  }
  v.detail << checked << " sectors";
  return v;
}

Verdict run_checks(const std::vector<std::string>& ids, const std::vector<std::pair<int, int>>& shapes, double tol) {
  Verdict v;
  double worst = 0.0;
  Tolerances t;
  t.identity_tol = tol;
  for (auto [m, n] : shapes) {
    const ModelParams p = ModelParams::defaults(m, n);
    for (const std::string& id : ids) {
      const StructureReport rep = verify_structure(id, p, {}, t);
      worst = std::max(worst, rep.max_deviation);
      v.require(rep.pass, id + " (m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")");
    }
  }
  v.detail << "max deviation " << worst;
  return v;
}

Verdict algebra_suite() {
  Verdict v = run_checks({"rmatrix_pt_unitarity_crossing", "reflection_K", "yang_baxter_on_sector", "ultralocal_relations",
                          "adjoint_inverse_identities", "exchange_relations", "strip_weight_identities"},
                         {{1, 1}, {2, 2}}, 1e-9);
  // unitarity of the representation on random vectors
  double worst = 0.0;
  const double t = 0.36;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int m = 0; m <= 3; ++m) {
    for (int n = 0; n <= 3; ++n) {
      FockVector f(enumerate_sector(n + 1, m));
      FockVector g(enumerate_sector(n, m));
      for (std::size_t i = 0; i < f.sector().size(); ++i) f[i] = cplx(d(gen), d(gen));
      for (std::size_t i = 0; i < g.sector().size(); ++i) g[i] = cplx(d(gen), d(gen));
      for (int l = 0; l <= m; ++l) {
        const cplx a = inner_product(apply_generator(Generator::annihilate, l, f, t), g, t);
        const cplx b = inner_product(f, apply_generator(Generator::create, l, g, t), t);
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
      }
    }
  }
  v.require(worst <= 1e-9, "unitarity");
  v.detail << ", unitarity " << worst;
  return v;
}

Verdict transfer_structure() {
  return run_checks({"transfer_commutativity_hermiticity", "tau_expansion"}, {{3, 2}}, 1e-9);
}

Verdict spectral_solves() {
  Verdict v;
  const ModelParams p = ModelParams::defaults(3, 2);
  const auto pts = solve_sector(p);
  v.require(pts.size() == 10, "sector size");
  int worst_iter = 0;
  double worst_bae = 0.0;
  for (const SpectralPoint& pt : pts) {
    const auto prob = MorseProblem::lattice(p, pt.lambda);
    worst_iter = std::max(worst_iter, pt.iterations);
    worst_bae = std::max(worst_bae, lattice_bae(p, pt.xi));
    v.require(check_bounds(prob, pt.xi).all(), "bounds at " + pt.lambda.to_string());
  }
  v.require(worst_iter <= 30, "iterations");
  v.require(worst_bae <= 1e-10, "lattice BAE");
  const ModelParams tiny = ModelParams::make(3, 2, 1e-4, 1e-8, 1e-8);
  double limit_dev = 0.0;
  for (const SpectralPoint& pt : solve_sector(tiny)) {
    for (int j = 0; j < 2; ++j) {
      limit_dev = std::max(limit_dev, std::abs(pt.xi[static_cast<std::size_t>(j)] - pi * (2 - j + pt.lambda[j]) / 6.0));
    }
  }
  v.require(limit_dev <= 1e-6, "small coupling limit");
  double cont_bae = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const ContinuumParams c = ContinuumParams::make(n, 1, 1, 1);
    for (const Partition& l : leading_partitions(n, 10)) {
      const auto prob = MorseProblem::continuum(c, l);
      const SpectralPoint pt = solve_spectral_point(prob);
      cont_bae = std::max(cont_bae, continuum_bae(c, pt.xi));
      v.require(check_bounds(prob, pt.xi).all(), "continuum bounds at " + l.to_string());
    }
  }
  v.require(cont_bae <= 1e-10, "continuum BAE");
  v.detail << "max iterations " << worst_iter << ", lattice BAE " << worst_bae << ", limit " << limit_dev
           << ", continuum BAE " << cont_bae;
  return v;
}

Verdict eigen_residuals() {
  Verdict v;
  double worst_t = 0.0;
  double worst_h = 0.0;
  for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}}) {
    const ModelParams p = ModelParams::defaults(m, n);
    for (const SpectralPoint& pt : solve_sector(p)) {
      const FockVector psi = wave_by_branching(SpectralVariables::from_xi(pt.xi), p);
      const double norm = psi.amplitudes().norm();
      for (double u : {0.6, 1.3}) {
        const cplx e = bethe_eigenvalues(u, pt.xi, p).transfer;
        worst_t = std::max(worst_t, (apply_transfer(u, psi, p).amplitudes() - e * psi.amplitudes()).norm() / norm);
      }
      double energy = 0.0;
      for (double x : pt.xi) energy += 2.0 * std::cos(x);
      worst_h = std::max(worst_h, (apply_hamiltonian(psi, p).amplitudes() - energy * psi.amplitudes()).norm() / norm);
    }
  }
  v.require(worst_t <= 1e-8, "transfer");
  v.require(worst_h <= 1e-10, "hamiltonian");
  v.detail << "transfer " << worst_t << ", hamiltonian " << worst_h;
  return v;
}

Verdict three_way() {
  Verdict v;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> radius(0.7, 1.4);
  std::uniform_real_distribution<double> angle(0.2, 2.9);
  double worst = 0.0;
  double origin = 0.0;
  for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}}) {
    const ModelParams p = ModelParams::defaults(m, n);
    for (int k = 0; k < 5; ++k) {
      SpectralVariables sv;
      for (int j = 0; j < n; ++j) sv.v.push_back(std::polar(radius(gen), angle(gen)));
      const FockVector a = wave_by_branching(sv, p);
      worst = std::max({worst, vec_rel(a, wave_by_creation(sv, p)), vec_rel(a, wave_by_symmetrization(sv, p))});
      const double fact = q_factorial(n, p.t);
      origin = std::max(origin, std::abs(a.at(Partition(std::vector<int>(static_cast<std::size_t>(n), 0))) - fact) / fact);
    }
  }
  v.require(worst <= 1e-10, "wave agreement");
  v.require(origin <= 1e-12, "origin value");
  v.detail << "max relative difference " << worst << ", origin " << origin;
  return v;
}

Verdict discrete_orthogonality() {
  Verdict v;
  const ModelParams p = ModelParams::defaults(3, 2);
  const auto pts = solve_sector(p);
  const Eigen::MatrixXcd g = gram_discrete(pts, p);
  const double corr = max_offdiag_correlation(g);
  v.require(g.rows() == 10, "10x10");
  v.require(corr <= 1e-8, "correlation");
  double worst = 0.0;
  for (const SpectralPoint& pt : pts) {
    for (const Partition& nu : enumerate_sector(2, p.m)->partitions()) {
      for (PieriMode mode : {PieriMode::nearest_neighbour, PieriMode::transfer}) {
        const PieriResidual r = pieri_residual(pt, nu, p, mode);
        worst = std::max(worst, r.residual / r.scale);
      }
    }
  }
  v.require(worst <= 1e-9, "Pieri");
  v.detail << "correlation " << corr << ", Pieri " << worst;
  return v;
}

Verdict continuum_orthogonality() {
  Verdict v;
  const ContinuumParams c = ContinuumParams::make(2, 1, 1, 1);
  const auto ls = leading_partitions(2, 4);
  const Eigen::MatrixXcd exact = gram_continuum(ls, c);
  const double corr = max_offdiag_correlation(exact);
  const double quad = relative_deviation(exact, gram_continuum_quadrature(ls, c));
  v.require(corr <= 1e-6, "correlation");
  v.require(quad <= 1e-6, "quadrature");
  v.detail << "correlation " << corr << ", quadrature deviation " << quad;
  return v;
}

Verdict robin_certificates() {
  Verdict v;
  const ContinuumParams c = ContinuumParams::make(2, 1, 1, 1);
  const std::vector<double> sample = default_sample(2);
  double nonaffine = 0.0;
  for (const std::vector<double>& xi : std::vector<std::vector<double>>{{7.3, 2.2}, {12.0, 0.4}, {3.1, 2.9}}) {
    const double sup = wave_sup_norm(xi, c);
    for (const Wall& w : alcove_walls(2)) {
      if (w.kind != WallKind::affine) nonaffine = std::max(nonaffine, robin_residual(xi, c, w, sample) / sup);
    }
  }
  double affine = 0.0;
  double control = 1e300;
  for (const Partition& l : leading_partitions(2, 4)) {
    const SpectralPoint pt = solve_spectral_point(MorseProblem::continuum(c, l));
    affine = std::max(affine, robin_residual(pt.xi, c, Wall{WallKind::affine, 0}, sample) / wave_sup_norm(pt.xi, c));
    std::vector<double> off = pt.xi;
    off[0] += 0.1;
    control = std::min(control, robin_residual(off, c, Wall{WallKind::affine, 0}, sample) / wave_sup_norm(off, c));
  }
  v.require(nonaffine <= 1e-10, "non-affine walls");
  v.require(affine <= 1e-8, "affine wall");
  v.require(control >= 1e-3, "negative control");
  v.detail << "non-affine " << nonaffine << ", affine " << affine << ", perturbed " << control;
  return v;
}

Verdict continuum_limit() {
  Verdict v;
  const ContinuumParams c = ContinuumParams::make(1, 1, 1, 1);
  const std::vector<int> ms{8, 16, 32, 64};
  for (const Partition& l : {Partition{0}, Partition{1}}) {
    const SweepReport rep = convergence_sweep(l, c, ms);
    double min_ratio = 1e300;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      min_ratio = std::min(min_ratio, rep.rows[i - 1].xi_deviation / rep.rows[i].xi_deviation);
    }
    const double last = rep.rows.back().xi_deviation;
    v.detail << "lambda " << l.to_string() << ": final " << last << ", min ratio " << min_ratio;
    v.require(min_ratio >= 1.5, "ratio for " + l.to_string());
    v.require(last < 0.02, "final deviation for " + l.to_string());
    v.detail << "; ";
  }
  // isometry of the staircase embedding, integrated cell by cell in difference coordinates
  double iso = 0.0;
  const ModelParams p = ModelParams::defaults(4, 2);
  for (const SpectralPoint& pt : solve_sector(p)) {
    const FockVector f = wave_by_branching(SpectralVariables::from_xi(pt.xi), p);
    const int m = p.m;
    const double h = 1.0 / (2.0 * m);
    cplx integral = 0.0;
    for (int a = 0; a <= m + 1; ++a) {
      for (int b = 0; b <= m + 1; ++b) {
        const std::vector<double> x{(a + b + 1.0) * h, (b + 0.5) * h};
        const cplx val = staircase_embed(f, p.t, x);
        integral += val * std::conj(val) * h * h;
      }
    }
    const cplx want = std::pow(2.0 * m, -2) * inner_product(f, f, p.t);
    iso = std::max(iso, std::abs(integral - want) / std::abs(want));
  }
  v.require(iso <= 1e-12, "isometry");
  v.detail << "isometry " << iso;
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"AC1 sector dimension", sector_dimension},
      {"AC2 algebra suite", algebra_suite},
      {"AC3 transfer structure", transfer_structure},
      {"AC4 spectral solves", spectral_solves},
      {"AC5 eigenfunction residuals", eigen_residuals},
      {"AC6 three-way wave equality", three_way},
      {"AC7 discrete orthogonality and Pieri", discrete_orthogonality},
      {"AC8 continuum orthogonality", continuum_orthogonality},
      {"AC9 Robin certificates", robin_certificates},
      {"AC10 continuum limit", continuum_limit},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s (%s; %.2fs)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.str().c_str(), secs);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
