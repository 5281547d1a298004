/// @file structure.hpp
/// Numeric certificates for the exact algebraic identities of the model: R- and
/// K-matrix symmetries, Yang-Baxter and reflection equations, adjoint / inverse /
/// reversal identities of the monodromy matrices, exchange relations between their
/// entries, the Laurent expansion of the transfer operator and properties of the
/// creation operator. Each check returns a report with one entry per identity.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qbethe/transfer.hpp"

namespace qbethe {

// ---- small scalar matrices ---------------------------------------------------

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

/// Trigonometric R-matrix, rows/columns ordered 2*i + k.
Mat4 rmatrix(cplx u, double q);
Mat4 swap_matrix();
Mat2 k_minus(cplx u, double a, double q);
Mat2 k_plus(cplx u, double a, double q);
Mat4 embed_first(const Mat2& x);   // x (x) I
Mat4 embed_second(const Mat2& x);  // I (x) x
Mat4 partial_transpose_first(const Mat4& x);
Mat4 partial_transpose_second(const Mat4& x);

// ---- 4x4 matrices over operators ------------------------------------------

struct OpMatrix4 {
  std::vector<FockOperator> entries;  // 16, row-major
  [[nodiscard]] const FockOperator& at(int r, int c) const { return entries[static_cast<std::size_t>(4 * r + c)]; }
  friend OpMatrix4 operator*(const OpMatrix4& x, const OpMatrix4& y);
};

OpMatrix4 op_embed_first(const OpMatrix2& x);
OpMatrix4 op_embed_second(const OpMatrix2& x);
OpMatrix4 op_scalar(const Mat4& x, int m);

// ---- reports ----------------------------------------------------------------

struct IdentityResult {
  std::string identity;
  double deviation = 0.0;
};

struct StructureReport {
  std::string check;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<IdentityResult> entries;
  std::vector<std::string> notes;
};

struct SpectralSamples {
  std::vector<double> singles{0.6, 0.85, 1.3};
  std::vector<std::pair<double, double>> pairs{{0.6, 1.3}, {0.85, 0.6}, {1.3, 0.85}};
};

/// Check identifiers accepted by verify_structure, in suite order.
const std::vector<std::string>& structure_check_ids();

/// Runs one check on the sectors 0..p.n of the model with p.m + 1 sites.
/// Throws std::invalid_argument for an unknown id.
StructureReport verify_structure(const std::string& check, const ModelParams& p, const SpectralSamples& samples = {},
                                 const Tolerances& tol = {});

/// Relative deviation of two operators over the given source sectors, normalized
/// by the largest entry of either side across all of them.
double operator_identity_deviation(const FockOperator& lhs, const FockOperator& rhs, std::span<const int> sectors);

}  // namespace qbethe
