#include <unsupported/Eigen/KroneckerProduct>

#include "qbethe/structure.hpp"
#include "support.hpp"

using namespace qbethe;
using namespace qbethe::testing;

namespace {

using Mat8 = Eigen::Matrix<cplx, 8, 8>;

// R acting on factors (i, j) of a threefold tensor product, i < j.
Mat8 lift(const Mat4& r, int i, int j) {
  Mat8 out = Mat8::Zero();
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const int bits_a[3] = {(a >> 2) & 1, (a >> 1) & 1, a & 1};
      const int bits_b[3] = {(b >> 2) & 1, (b >> 1) & 1, b & 1};
      const int k = 3 - i - j;
      if (bits_a[k] != bits_b[k]) continue;
      out(a, b) = r(2 * bits_a[i] + bits_a[j], 2 * bits_b[i] + bits_b[j]);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("scalar Yang-Baxter equation in braid form on three factors") {
  // the R-matrix includes the flip of the two factors, so adjacent positions suffice
  const double q = 0.6;
  for (auto [u, v] : std::vector<std::pair<cplx, cplx>>{{0.6, 1.3}, {cplx(0.8, 0.3), 1.7}, {2.1, cplx(0.4, -0.2)}}) {
    const Mat8 lhs = lift(rmatrix(u / v, q), 0, 1) * lift(rmatrix(u, q), 1, 2) * lift(rmatrix(v, q), 0, 1);
    const Mat8 rhs = lift(rmatrix(v, q), 1, 2) * lift(rmatrix(u, q), 0, 1) * lift(rmatrix(u / v, q), 1, 2);
    CHECK(relative_deviation(lhs, rhs) <= 1e-13);
    // and the flip-free version fails, so the braid form is not vacuous
    const Mat8 bad = lift(rmatrix(v, q), 0, 1) * lift(rmatrix(u, q), 1, 2) * lift(rmatrix(u / v, q), 0, 1);
    CHECK(relative_deviation(bad, rhs) > 1e-3);
  }
}

TEST_CASE("embeddings match the Kronecker product") {
  const Mat2 x = Mat2::Random();
  const Mat2 id = Mat2::Identity();
  CHECK(relative_deviation(embed_first(x), Eigen::kroneckerProduct(x, id).eval()) == 0.0);
  CHECK(relative_deviation(embed_second(x), Eigen::kroneckerProduct(id, x).eval()) == 0.0);
  const Mat4 y = Mat4::Random();
  CHECK(relative_deviation(partial_transpose_first(partial_transpose_first(y)), y) == 0.0);
  const Mat4 full = y.transpose();
  CHECK(relative_deviation(partial_transpose_second(partial_transpose_first(y)), full) == 0.0);
}

TEST_CASE("scalar reflection equation for both boundary matrices") {
  const double q = 0.6;
  for (auto [u, v] : std::vector<std::pair<cplx, cplx>>{{0.6, 1.3}, {0.85, 0.6}, {cplx(1.1, 0.2), 0.7}}) {
    for (double a : {-0.4, 0.3}) {
      const Mat4 ku = embed_first(k_minus(u, a, q));
      const Mat4 kv = embed_first(k_minus(v, a, q));
      CHECK(relative_deviation(rmatrix(u / v, q) * ku * rmatrix(q * u * v, q) * kv,
                               kv * rmatrix(q * u * v, q) * ku * rmatrix(u / v, q)) <= 1e-13);
      const Mat4 pu = embed_second(k_plus(u, a, q));
      const Mat4 pv = embed_second(k_plus(v, a, q));
      CHECK(relative_deviation(rmatrix(u / v, q) * pu * rmatrix(q * u * v, q) * pv,
                               pv * rmatrix(q * u * v, q) * pu * rmatrix(u / v, q)) <= 1e-13);
    }
  }
}

TEST_CASE("every structure check passes on the default couplings") {
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {3, 2}}) {
    const ModelParams p = ModelParams::defaults(m, n);
    for (const std::string& id : structure_check_ids()) {
      const StructureReport rep = verify_structure(id, p);
      INFO("check " << id << " on m=" << m << " n=" << n << " max deviation " << rep.max_deviation);
      CHECK(rep.pass);
      CHECK(rep.check == id);
      CHECK(!rep.entries.empty());
      CHECK(rep.max_deviation <= rep.tolerance);
    }
  }
}

TEST_CASE("structure checks hold at other generic couplings") {
  const ModelParams p = ModelParams::make(2, 2, 0.45, -0.7, 0.55);
  SpectralSamples s;
  s.singles = {0.55, 0.9, 1.45};
  s.pairs = {{0.55, 1.45}, {0.9, 0.55}, {1.45, 0.9}};
  for (const std::string& id : structure_check_ids()) {
    INFO("check " << id);
    CHECK(verify_structure(id, p, s).pass);
  }
}

TEST_CASE("structure checks are sensitive to a perturbed model") {
  // comparing the transfer operator against a different a_plus must fail loudly
  const ModelParams p = ModelParams::defaults(2, 2);
  const ModelParams other = ModelParams::make(2, 2, 0.6, 0.31, -0.4);
  const auto a = transfer_operator(0.7, p);
  const auto b = transfer_operator(0.7, other);
  CHECK(operator_identity_deviation(a, b, std::vector<int>{1, 2}) > 1e-4);
}

TEST_CASE("unknown check ids are rejected") {
  CHECK_THROWS_AS(verify_structure("no_such_check", ModelParams::defaults(2, 2)), std::invalid_argument);
  CHECK(structure_check_ids().size() == 12);
}
