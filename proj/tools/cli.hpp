/// @file cli.hpp
/// Command dispatch for the qbethe command-line tool, kept separate from main()
/// so tests can drive it directly.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbethe/core.hpp"
#include "qbethe/fock.hpp"

namespace qbethe::cli {

enum ExitCode : int { ok = 0, runtime_failure = 1, invalid_parameters = 2, tolerance_failure = 3 };

struct RunConfig {
  std::string command;             // spectrum | gram | verify | converge | wavefn
  bool continuum = false;          // --continuum selects the continuum model
  ModelParams lattice = ModelParams::defaults(3, 2);
  ContinuumParams continuum_params = ContinuumParams::make(1, 1.0, 1.0, 1.0);
  std::vector<Partition> lambdas;  // explicit selections; empty means the command default
  int count = 0;                   // continuum: number of leading partitions (0 = default)
  std::string check = "all";
  std::vector<int> m_list{8, 16, 32, 64};
  std::string format = "json";
  std::string output;              // empty = stdout
  Tolerances tol;
  double bae_tol = 1e-10;
  double orthogonality_tol = 1e-8;
  double continuum_orthogonality_tol = 1e-6;
  double eigen_tol = 1e-8;
  double converge_tol = 0.02;
  double converge_ratio = 1.5;
};

struct RunResult {
  int exit_code = ok;
  std::string body;  // serialized JSON or CSV
};

/// Parses argv (argv[0] is the program name). Throws std::invalid_argument on bad input.
RunConfig parse_arguments(int argc, const char* const* argv);

/// Runs one command. Throws std::invalid_argument for invalid parameters.
RunResult dispatch(const RunConfig& cfg);

/// Full CLI: parse, dispatch, write the artifact, return the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Output path after applying QBETHE_OUTPUT_DIR to relative paths.
std::string resolve_output_path(const std::string& path);

}  // namespace qbethe::cli
