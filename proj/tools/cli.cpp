#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbethe/bethe.hpp"
#include "qbethe/continuum.hpp"
#include "qbethe/hall_littlewood.hpp"
#include "qbethe/kernels.hpp"
#include "qbethe/structure.hpp"
#include "qbethe/transfer.hpp"

namespace qbethe::cli {

namespace {

using json = nlohmann::ordered_json;

const std::vector<std::string> commands{"spectrum", "gram", "verify", "converge", "wavefn"};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

template <typename T, typename F>
std::string join_map(const std::vector<T>& xs, F&& f, char sep = ' ') {
  std::vector<std::string> parts;
  for (const T& x : xs) parts.push_back(f(x));
  return join(parts, sep);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number for " + key + ": '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer for " + key + ": '" + value + "'");
  }
}

Partition parse_partition(const std::string& text) {
  std::vector<int> parts;
  for (const std::string& piece : split(text, ',')) parts.push_back(parse_int("lambda", piece));
  if (parts.empty()) throw std::invalid_argument("empty lambda");
  if (!std::is_sorted(parts.begin(), parts.end(), std::greater<>()) || parts.back() < 0) {
    throw std::invalid_argument("lambda must be weakly decreasing and non-negative: " + text);
  }
  return Partition(std::move(parts));
}

json partition_json(const Partition& p) { return json(p.vec()); }

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// One tabular artifact: JSON rows plus the same data flattened for CSV.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::string csv() const {
    std::string out = join(header, ',') + "\n";
    for (const auto& r : rows) {
      std::vector<std::string> quoted;
      for (const std::string& cell : r) quoted.push_back(cell.find_first_of(", ") != std::string::npos ? "\"" + cell + "\"" : cell);
      out += join(quoted, ',') + "\n";
    }
    return out;
  }
};

struct Outcome {
  json results = json::array();
  json residuals = json::object();
  json tolerances = json::object();
  bool pass = true;
  Table table;
};

void check_lattice_limits(const ModelParams& p) {
  const SectorLimits limits;
  if (p.m > limits.max_m || p.n > limits.max_n || sector_size(p.n, p.m) > limits.max_dense) {
    throw std::invalid_argument("lattice sector (n=" + std::to_string(p.n) + ", m=" + std::to_string(p.m) +
                                ") exceeds the limits n <= " + std::to_string(limits.max_n) +
                                ", m <= " + std::to_string(limits.max_m));
  }
}

std::vector<Partition> continuum_selection(const RunConfig& cfg, int default_count) {
  if (!cfg.lambdas.empty()) return cfg.lambdas;
  return leading_partitions(cfg.continuum_params.n, cfg.count > 0 ? cfg.count : default_count);
}

std::vector<Partition> lattice_selection(const RunConfig& cfg) {
  if (!cfg.lambdas.empty()) return cfg.lambdas;
  return enumerate_sector(cfg.lattice.n, cfg.lattice.m)->partitions();
}

void require_lengths(const std::vector<Partition>& ls, int n) {
  for (const Partition& l : ls) {
    if (l.length() != n) throw std::invalid_argument("lambda " + l.to_string() + " must have n = " + std::to_string(n) + " parts");
  }
}

// ---- commands ---------------------------------------------------------------

Outcome run_spectrum(const RunConfig& cfg) {
  Outcome out;
  out.table.header = {"lambda", "xi", "energy", "bae_residual", "grad_norm", "iterations", "chamber", "alcove",
                      "moment_bounds", "gap_bounds"};
  std::vector<SpectralPoint> points;
  std::vector<MorseProblem> problems;
  if (cfg.continuum) {
    const auto ls = continuum_selection(cfg, 10);
    require_lengths(ls, cfg.continuum_params.n);
    for (const Partition& l : ls) {
      problems.push_back(MorseProblem::continuum(cfg.continuum_params, l));
      points.push_back(solve_spectral_point(problems.back(), {cfg.tol.solver_tol}));
    }
  } else {
    check_lattice_limits(cfg.lattice);
    if (cfg.lambdas.empty()) {
      points = solve_sector(cfg.lattice, {cfg.tol.solver_tol});
      for (const SpectralPoint& pt : points) problems.push_back(MorseProblem::lattice(cfg.lattice, pt.lambda));
    } else {
      for (const Partition& l : cfg.lambdas) {
        problems.push_back(MorseProblem::lattice(cfg.lattice, l));
        points.push_back(solve_spectral_point(problems.back(), {cfg.tol.solver_tol}));
      }
    }
  }
  double worst_bae = 0.0;
  double worst_grad = 0.0;
  bool bounds = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SpectralPoint& pt = points[i];
    double energy = 0.0;
    for (double x : pt.xi) energy += cfg.continuum ? x * x : 2.0 * std::cos(x);
    const double bae = bae_residual(problems[i], pt.xi);
    const BoundCheck bc = check_bounds(problems[i], pt.xi);
    worst_bae = std::max(worst_bae, bae);
    worst_grad = std::max(worst_grad, pt.grad_norm);
    bounds = bounds && bc.all();
    out.results.push_back(json{{"lambda", partition_json(pt.lambda)},
                               {"xi", pt.xi},
                               {"energy", energy},
                               {"bae_residual", bae},
                               {"grad_norm", pt.grad_norm},
                               {"iterations", pt.iterations},
                               {"bounds",
                                {{"chamber", bc.chamber},
                                 {"alcove", bc.alcove},
                                 {"moment", bc.moment_bounds},
                                 {"gap", bc.gap_bounds}}}});
    out.table.rows.push_back({join_map(pt.lambda.vec(), [](int v) { return std::to_string(v); }),
                              join_map(pt.xi, fmt), fmt(energy), fmt(bae), fmt(pt.grad_norm),
                              std::to_string(pt.iterations), std::to_string(bc.chamber), std::to_string(bc.alcove),
                              std::to_string(bc.moment_bounds), std::to_string(bc.gap_bounds)});
  }
  out.residuals = {{"max_bae_residual", worst_bae}, {"max_grad_norm", worst_grad}, {"all_bounds_hold", bounds}};
  out.tolerances = {{"bae_residual", cfg.bae_tol}, {"grad_norm", cfg.tol.solver_tol}};
  out.pass = worst_bae <= cfg.bae_tol && worst_grad <= cfg.tol.solver_tol && bounds;
  return out;
}

void matrix_table(Outcome& out, const Eigen::MatrixXcd& g) {
  out.table.header = {"row", "col", "re", "im"};
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      out.table.rows.push_back({std::to_string(r), std::to_string(c), fmt(g(r, c).real()), fmt(g(r, c).imag())});
    }
  }
}

json matrix_json(const Eigen::MatrixXcd& g) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    std::vector<double> a;
    std::vector<double> b;
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      a.push_back(g(r, c).real());
      b.push_back(g(r, c).imag());
    }
    re.push_back(a);
    im.push_back(b);
  }
  return json{{"re", re}, {"im", im}};
}

Outcome run_gram(const RunConfig& cfg) {
  Outcome out;
  Eigen::MatrixXcd g;
  std::vector<Partition> basis;
  double tol = cfg.orthogonality_tol;
  if (cfg.continuum) {
    basis = continuum_selection(cfg, 4);
    require_lengths(basis, cfg.continuum_params.n);
    g = gram_continuum(basis, cfg.continuum_params);
    tol = cfg.continuum_orthogonality_tol;
    if (cfg.continuum_params.n == 2) {
      const double dev = relative_deviation(g, gram_continuum_quadrature(basis, cfg.continuum_params));
      out.residuals["quadrature_deviation"] = dev;
      out.tolerances["quadrature_deviation"] = tol;
      out.pass = out.pass && dev <= tol;
    }
  } else {
    check_lattice_limits(cfg.lattice);
    std::vector<SpectralPoint> points;
    if (cfg.lambdas.empty()) {
      points = solve_sector(cfg.lattice, {cfg.tol.solver_tol});
    } else {
      for (const Partition& l : cfg.lambdas) points.push_back(solve_spectral_point(MorseProblem::lattice(cfg.lattice, l)));
    }
    for (const SpectralPoint& pt : points) basis.push_back(pt.lambda);
    g = gram_discrete(points, cfg.lattice);
  }
  const double corr = max_offdiag_correlation(g);
  json basis_json = json::array();
  for (const Partition& l : basis) basis_json.push_back(partition_json(l));
  out.results.push_back(json{{"basis", basis_json}, {"matrix", matrix_json(g)}, {"max_offdiag_correlation", corr}});
  out.residuals["max_offdiag_correlation"] = corr;
  out.tolerances["max_offdiag_correlation"] = tol;
  out.pass = out.pass && corr <= tol;
  matrix_table(out, g);
  return out;
}

Outcome run_verify(const RunConfig& cfg) {
  if (cfg.continuum) throw std::invalid_argument("verify runs on the lattice model only");
  check_lattice_limits(cfg.lattice);
  Outcome out;
  out.table.header = {"check", "identity", "deviation", "tolerance", "pass"};
  std::vector<std::string> ids;
  if (cfg.check == "all") {
    ids = structure_check_ids();
  } else {
    const auto& known = structure_check_ids();
    if (std::find(known.begin(), known.end(), cfg.check) == known.end()) {
      throw std::invalid_argument("unknown check '" + cfg.check + "'; known: " + join(known, ' '));
    }
    ids = {cfg.check};
  }
  for (const std::string& id : ids) {
    const StructureReport rep = verify_structure(id, cfg.lattice, {}, cfg.tol);
    json entries = json::array();
    for (const IdentityResult& e : rep.entries) {
      entries.push_back(json{{"identity", e.identity}, {"deviation", e.deviation}});
      out.table.rows.push_back({id, e.identity, fmt(e.deviation), fmt(rep.tolerance), std::to_string(e.deviation <= rep.tolerance)});
    }
    out.results.push_back(json{{"check", id},
                               {"pass", rep.pass},
                               {"max_deviation", rep.max_deviation},
                               {"notes", rep.notes},
                               {"entries", entries}});
    out.residuals[id] = rep.max_deviation;
    out.tolerances[id] = rep.tolerance;
    out.pass = out.pass && rep.pass;
  }
  return out;
}

Outcome run_converge(const RunConfig& cfg) {
  Outcome out;
  const ContinuumParams& cp = cfg.continuum_params;
  std::vector<Partition> ls = cfg.lambdas;
  if (ls.empty()) ls.push_back(Partition(std::vector<int>(static_cast<std::size_t>(cp.n), 0)));
  require_lengths(ls, cp.n);
  for (int m : cfg.m_list) {
    if (m < 1) throw std::invalid_argument("m values must be positive");
  }
  out.table.header = {"lambda", "m", "scaled_xi", "xi_deviation", "ratio", "staircase_norm", "continuum_norm",
                      "staircase_value_re", "staircase_value_im", "continuum_value_re", "continuum_value_im"};
  json worst = json::object();
  for (const Partition& l : ls) {
    const SweepReport rep = convergence_sweep(l, cp, cfg.m_list);
    json rows = json::array();
    double prev = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const SweepRow& r = rep.rows[i];
      const double ratio = i == 0 ? 0.0 : prev / r.xi_deviation;
      if (i > 0) min_ratio = std::min(min_ratio, ratio);
      prev = r.xi_deviation;
      rows.push_back(json{{"m", r.m},
                          {"scaled_xi", r.scaled_xi},
                          {"xi_deviation", r.xi_deviation},
                          {"ratio", ratio},
                          {"staircase_norm", r.staircase_norm},
                          {"staircase_value", complex_json(r.staircase_value)},
                          {"iterations", r.iterations}});
      out.table.rows.push_back({join_map(l.vec(), [](int v) { return std::to_string(v); }), std::to_string(r.m),
                                join_map(r.scaled_xi, fmt), fmt(r.xi_deviation), fmt(ratio), fmt(r.staircase_norm),
                                fmt(rep.continuum_norm), fmt(r.staircase_value.real()), fmt(r.staircase_value.imag()),
                                fmt(rep.continuum_value.real()), fmt(rep.continuum_value.imag())});
    }
    const double final_dev = rep.rows.empty() ? 0.0 : rep.rows.back().xi_deviation;
    out.results.push_back(json{{"lambda", partition_json(l)},
                               {"continuum_xi", rep.continuum_xi},
                               {"continuum_norm", rep.continuum_norm},
                               {"sample", rep.sample},
                               {"continuum_value", complex_json(rep.continuum_value)},
                               {"rows", rows}});
    const std::string key = l.to_string();
    out.residuals[key] = {{"final_xi_deviation", final_dev}, {"min_ratio", rep.rows.size() > 1 ? min_ratio : 0.0}};
    const bool ok_ratio = rep.rows.size() < 2 || min_ratio >= cfg.converge_ratio;
    out.pass = out.pass && ok_ratio && final_dev < cfg.converge_tol;
  }
  out.tolerances = {{"final_xi_deviation", cfg.converge_tol}, {"min_ratio", cfg.converge_ratio}};
  return out;
}

Outcome run_wavefn(const RunConfig& cfg) {
  Outcome out;
  if (cfg.continuum) {
    const ContinuumParams& cp = cfg.continuum_params;
    std::vector<Partition> ls = cfg.lambdas;
    if (ls.empty()) ls.push_back(Partition(std::vector<int>(static_cast<std::size_t>(cp.n), 0)));
    require_lengths(ls, cp.n);
    out.table.header = {"lambda", "x", "re", "im"};
    const int grid = 11;
    double worst = 0.0;
    for (const Partition& l : ls) {
      const MorseProblem prob = MorseProblem::continuum(cp, l);
      const SpectralPoint pt = solve_spectral_point(prob, {cfg.tol.solver_tol});
      const ExponentialSum psi = continuum_wave_sum(pt.xi, cp);
      json values = json::array();
      // grid over the closed alcove, coordinates weakly decreasing
      std::vector<int> idx(static_cast<std::size_t>(cp.n), 0);
      std::vector<double> x(static_cast<std::size_t>(cp.n));
      while (true) {
        for (int j = 0; j < cp.n; ++j) x[static_cast<std::size_t>(j)] = 0.5 * idx[static_cast<std::size_t>(j)] / (grid - 1);
        const cplx v = psi.evaluate(x);
        values.push_back(json{{"x", x}, {"value", complex_json(v)}});
        out.table.rows.push_back({join_map(l.vec(), [](int a) { return std::to_string(a); }), join_map(x, fmt),
                                  fmt(v.real()), fmt(v.imag())});
        int pos = cp.n - 1;
        while (pos >= 0) {
          const int cap = pos == 0 ? grid - 1 : idx[static_cast<std::size_t>(pos - 1)];
          if (idx[static_cast<std::size_t>(pos)] < cap) {
            ++idx[static_cast<std::size_t>(pos)];
            for (int k = pos + 1; k < cp.n; ++k) idx[static_cast<std::size_t>(k)] = 0;
            break;
          }
          --pos;
        }
        if (pos < 0) break;
      }
      const double sup = wave_sup_norm(pt.xi, cp);
      json walls = json::array();
      const std::vector<double> sample = default_sample(cp.n);
      for (const Wall& w : alcove_walls(cp.n)) {
        const double r = robin_residual(pt.xi, cp, w, sample) / sup;
        worst = std::max(worst, r);
        const char* kind = w.kind == WallKind::pair ? "pair" : w.kind == WallKind::origin ? "origin" : "affine";
        walls.push_back(json{{"wall", kind}, {"index", w.index}, {"relative_residual", r}});
      }
      out.results.push_back(json{{"lambda", partition_json(l)}, {"xi", pt.xi}, {"values", values}, {"robin", walls}});
    }
    out.residuals = {{"max_robin_relative_residual", worst}};
    out.tolerances = {{"max_robin_relative_residual", cfg.eigen_tol}};
    out.pass = worst <= cfg.eigen_tol;
    return out;
  }
  const ModelParams& p = cfg.lattice;
  check_lattice_limits(p);
  out.table.header = {"lambda", "mu", "re", "im"};
  double worst_t = 0.0;
  double worst_h = 0.0;
  for (const Partition& l : lattice_selection(cfg)) {
    const SpectralPoint pt = solve_spectral_point(MorseProblem::lattice(p, l), {cfg.tol.solver_tol});
    const FockVector psi = wave_by_branching(SpectralVariables::from_xi(pt.xi), p);
    const double norm = psi.amplitudes().norm();
    double res_t = 0.0;
    for (double u : {0.6, 1.3}) {
      const TransferEigenvalues ev = bethe_eigenvalues(u, pt.xi, p);
      res_t = std::max(res_t, (apply_transfer(u, psi, p).amplitudes() - ev.transfer * psi.amplitudes()).norm() / norm);
    }
    const double energy = bethe_eigenvalues(0.6, pt.xi, p).hamiltonian;
    const double res_h = (apply_hamiltonian(psi, p).amplitudes() - energy * psi.amplitudes()).norm() / norm;
    worst_t = std::max(worst_t, res_t);
    worst_h = std::max(worst_h, res_h);
    json values = json::array();
    for (std::size_t i = 0; i < psi.sector().size(); ++i) {
      values.push_back(json{{"mu", partition_json(psi.sector()[i])}, {"value", complex_json(psi[i])}});
      out.table.rows.push_back({join_map(l.vec(), [](int a) { return std::to_string(a); }),
                                join_map(psi.sector()[i].vec(), [](int a) { return std::to_string(a); }),
                                fmt(psi[i].real()), fmt(psi[i].imag())});
    }
    out.results.push_back(json{{"lambda", partition_json(l)},
                               {"xi", pt.xi},
                               {"values", values},
                               {"transfer_residual", res_t},
                               {"hamiltonian_residual", res_h}});
  }
  out.residuals = {{"transfer_residual", worst_t}, {"hamiltonian_residual", worst_h}};
  out.tolerances = {{"transfer_residual", cfg.eigen_tol}, {"hamiltonian_residual", cfg.bae_tol}};
  out.pass = worst_t <= cfg.eigen_tol && worst_h <= cfg.bae_tol;
  return out;
}

json params_json(const RunConfig& cfg) {
  if (cfg.continuum) {
    const ContinuumParams& c = cfg.continuum_params;
    return json{{"model", "continuum"}, {"n", c.n}, {"g", c.g}, {"g_plus", c.g_plus}, {"g_minus", c.g_minus}};
  }
  const ModelParams& p = cfg.lattice;
  return json{{"model", "lattice"}, {"m", p.m},           {"n", p.n},
              {"q", p.q},           {"t", p.t},           {"a_plus", p.a_plus},
              {"a_minus", p.a_minus}};
}

void apply_key_values(RunConfig& cfg, const std::vector<std::string>& pairs, bool lattice_given) {
  std::map<std::string, std::string> kv;
  for (const std::string& item : pairs) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (cfg.continuum) {
    ContinuumParams c = cfg.continuum_params;
    if (cfg.command != "converge" && cfg.command != "spectrum" && cfg.command != "gram" && cfg.command != "wavefn") {
      throw std::invalid_argument("--continuum is not available for " + cfg.command);
    }
    if (cfg.command == "gram" && !kv.count("n")) c.n = 2;
    for (const auto& [k, v] : kv) {
      if (k == "n") c.n = parse_int(k, v);
      else if (k == "g") c.g = parse_double(k, v);
      else if (k == "g_plus" || k == "g+") c.g_plus = parse_double(k, v);
      else if (k == "g_minus" || k == "g-") c.g_minus = parse_double(k, v);
      else throw std::invalid_argument("unknown continuum parameter '" + k + "'");
    }
    cfg.continuum_params = ContinuumParams::make(c.n, c.g, c.g_plus, c.g_minus);
    return;
  }
  if (cfg.command == "converge") {
    if (lattice_given) throw std::invalid_argument("converge runs on the continuum model (use --continuum)");
    cfg.continuum = true;
    apply_key_values(cfg, pairs, false);
    return;
  }
  ModelParams p = cfg.lattice;
  std::optional<double> t_value;
  for (const auto& [k, v] : kv) {
    if (k == "m") p.m = parse_int(k, v);
    else if (k == "n") p.n = parse_int(k, v);
    else if (k == "q") p.q = parse_double(k, v);
    else if (k == "t") t_value = parse_double(k, v);
    else if (k == "a_plus" || k == "a+") p.a_plus = parse_double(k, v);
    else if (k == "a_minus" || k == "a-") p.a_minus = parse_double(k, v);
    else throw std::invalid_argument("unknown lattice parameter '" + k + "'");
  }
  if (t_value) {
    if (kv.count("q")) throw std::invalid_argument("give either q or t, not both");
    if (!(*t_value > 0.0)) throw std::invalid_argument("t must be positive");
    p.q = std::sqrt(*t_value);
  }
  if (p.n < 1) throw std::invalid_argument("n must be >= 1");
  cfg.lattice = ModelParams::make(p.m, p.n, p.q, p.a_plus, p.a_minus);
}

}  // namespace

RunConfig parse_arguments(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Bethe Ansatz spectra, eigenfunctions and structure checks for the open q-boson chain"};
  std::vector<std::string> positionals;
  bool lattice = false;
  std::vector<std::string> lambda_text;
  std::string m_list_text;
  app.add_option("command", cfg.command, "spectrum | gram | verify | converge | wavefn")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("params", positionals, "model parameters as key=value");
  auto* lat = app.add_flag("--lattice", lattice, "lattice q-boson model (default)");
  app.add_flag("--continuum", cfg.continuum, "continuum model on the alcove")->excludes(lat);
  app.add_option("--lambda", lambda_text, "partition as comma-separated parts; repeatable");
  app.add_option("--count", cfg.count, "continuum: number of leading partitions")->check(CLI::NonNegativeNumber);
  app.add_option("--check", cfg.check, "structure check id or 'all'");
  app.add_option("--m-list", m_list_text, "converge: comma-separated site counts");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", cfg.output, "output file (default stdout)");
  app.add_option("--identity-tol", cfg.tol.identity_tol, "tolerance for algebraic identities");
  app.add_option("--solver-tol", cfg.tol.solver_tol, "Newton gradient tolerance");
  app.add_option("--bae-tol", cfg.bae_tol, "Bethe equation residual tolerance");
  app.add_option("--orthogonality-tol", cfg.orthogonality_tol, "lattice Gram off-diagonal tolerance");
  app.add_option("--eigen-tol", cfg.eigen_tol, "eigenfunction and boundary residual tolerance");
  app.add_option("--converge-tol", cfg.converge_tol, "final continuum-limit deviation tolerance");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }
  for (const std::string& s : lambda_text) cfg.lambdas.push_back(parse_partition(s));
  if (!m_list_text.empty()) {
    cfg.m_list.clear();
    for (const std::string& s : split(m_list_text, ',')) cfg.m_list.push_back(parse_int("m-list", s));
    if (!std::is_sorted(cfg.m_list.begin(), cfg.m_list.end())) throw std::invalid_argument("--m-list must increase");
  }
  cfg.tol.validate();
  apply_key_values(cfg, positionals, lattice);
  if (!cfg.continuum) {
    for (const Partition& l : cfg.lambdas) {
      if (l.length() != cfg.lattice.n || !l.fits(cfg.lattice.m)) {
        throw std::invalid_argument("lambda " + l.to_string() + " is not in the sector (n, m)");
      }
    }
  }
  return cfg;
}

RunResult dispatch(const RunConfig& cfg) {
  Outcome out;
  if (cfg.command == "spectrum") out = run_spectrum(cfg);
  else if (cfg.command == "gram") out = run_gram(cfg);
  else if (cfg.command == "verify") out = run_verify(cfg);
  else if (cfg.command == "converge") out = run_converge(cfg);
  else if (cfg.command == "wavefn") out = run_wavefn(cfg);
  else throw std::invalid_argument("unknown command '" + cfg.command + "'");
  RunResult res;
  res.exit_code = out.pass ? ok : tolerance_failure;
  if (cfg.format == "csv") {
    res.body = out.table.csv();
  } else {
    const json doc{{"command", cfg.command},     {"params", params_json(cfg)},     {"results", out.results},
                   {"residuals", out.residuals}, {"tolerances", out.tolerances}, {"pass", out.pass}};
    res.body = doc.dump(2) + "\n";
  }
  return res;
}

std::string resolve_output_path(const std::string& path) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  const char* dir = std::getenv("QBETHE_OUTPUT_DIR");
  if (p.is_absolute() || dir == nullptr || *dir == '\0') return path;
  return (std::filesystem::path(dir) / p).string();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_arguments(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << "usage: qbethe <spectrum|gram|verify|converge|wavefn> [--lattice|--continuum] [key=value ...]\n"
           "       [--lambda a,b,...] [--count k] [--check id|all] [--m-list 8,16,...]\n"
           "       [--format json|csv] [--output file] [--identity-tol x] [--solver-tol x]\n"
           "       [--bae-tol x] [--orthogonality-tol x] [--eigen-tol x] [--converge-tol x]\n";
    return ok;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return invalid_parameters;
  }
  RunResult res;
  try {
    res = dispatch(cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return invalid_parameters;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return runtime_failure;
  }
  const std::string path = resolve_output_path(cfg.output);
  if (path.empty()) {
    out << res.body;
  } else {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream file(target);
    if (!file) {
      err << "error: cannot write " << path << "\n";
      return runtime_failure;
    }
    file << res.body;
  }
  if (res.exit_code == tolerance_failure) err << "tolerance check failed\n";
  return res.exit_code;
}

}  // namespace qbethe::cli
