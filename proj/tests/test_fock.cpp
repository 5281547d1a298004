#include <cmath>

#include "qbethe/fock.hpp"
#include "qbethe/fock_operator.hpp"
#include "qbethe/kernels.hpp"
#include "support.hpp"

using namespace qbethe;
using namespace qbethe::testing;

namespace {

// Matrix of a generator on sector n built straight from the basis-ket action.
Eigen::MatrixXcd generator_oracle(Generator kind, int site, int n, int m, double t) {
  const int target_n = kind == Generator::annihilate ? n - 1 : kind == Generator::create ? n + 1 : n;
  const SectorPtr src = enumerate_sector(n, m);
  const SectorPtr dst = enumerate_sector(target_n, m);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dst->size()), static_cast<Eigen::Index>(src->size()));
  for (std::size_t c = 0; c < src->size(); ++c) {
    const std::vector<int> lam = (*src)[c].vec();
    const int ml = mult(lam, site);
    std::vector<int> img = lam;
    double coeff = 1.0;
    switch (kind) {
      case Generator::annihilate: {
        if (ml == 0) continue;
        img.erase(std::find(img.begin(), img.end(), site));
        break;
      }
      case Generator::create:
        img.push_back(site);
        std::sort(img.begin(), img.end(), std::greater<>());
        coeff = qint(ml + 1, t);
        break;
      case Generator::t_power_plus:
        coeff = std::pow(t, ml);
        break;
      case Generator::t_power_minus:
        coeff = std::pow(t, -ml);
        break;
    }
    out(static_cast<Eigen::Index>(dst->index(Partition(img))), static_cast<Eigen::Index>(c)) = coeff;
  }
  return out;
}

Eigen::MatrixXcd weights(int n, int m, double t) {
  return weight_diagonal(*enumerate_sector(n, m), t).cast<cplx>().asDiagonal();
}

}  // namespace

TEST_CASE("sector dimension equals the binomial coefficient") {
  for (int n = 0; n <= 6; ++n) {
    for (int m = 0; m <= 6; ++m) {
      const std::size_t brute = count_by_recursion(n, m, m);
      CHECK(enumerate_sector(n, m)->size() == brute);
      CHECK(sector_size(n, m) == brute);
    }
  }
  CHECK(sector_size(-1, 3) == 0);
  CHECK(enumerate_sector(-1, 3)->size() == 0);
}

TEST_CASE("basis order is reverse lexicographic with explicit zeros") {
  const auto s = enumerate_sector(2, 3);
  REQUIRE(s->size() == 10);
  CHECK((*s)[0] == Partition{3, 3});
  CHECK((*s)[1] == Partition{3, 2});
  CHECK((*s)[9] == Partition{0, 0});
  for (std::size_t i = 1; i < s->size(); ++i) CHECK((*s)[i - 1] > (*s)[i]);
  for (std::size_t i = 0; i < s->size(); ++i) CHECK(s->index((*s)[i]) == i);
  CHECK_THROWS_AS((void)s->index(Partition{4, 0}), std::out_of_range);
}

TEST_CASE("partition helpers") {
  const Partition p{3, 1, 1, 0};
  CHECK(p.total() == 5);
  CHECK(p.multiplicity(1) == 2);
  CHECK(p.multiplicity(0) == 1);
  CHECK(p.with_part(2) == Partition{3, 2, 1, 1, 0});
  CHECK(p.without_part(1) == Partition{3, 1, 0});
  CHECK_THROWS_AS((void)p.without_part(2), std::invalid_argument);
  CHECK_THROWS_AS(Partition({1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Partition({1, -1}), std::invalid_argument);
  CHECK(p.fits(3));
  CHECK_FALSE(p.fits(2));
}

TEST_CASE("weighted inner product matches the multiplicity formula") {
  const double t = 0.36;
  for (int n = 0; n <= 3; ++n) {
    const FockVector f = random_vector(n, 3);
    const FockVector g = random_vector(n, 3);
    CHECK(rel(inner_product(f, g, t), weighted_inner(f, g, t)) <= 1e-14);
    CHECK(weighted_norm(f, t) == doctest::Approx(std::sqrt(weighted_inner(f, f, t).real())).epsilon(1e-14));
  }
  CHECK(weight_delta(Partition{2, 2, 0}, t) == doctest::Approx(1.0 / qint(2, t)).epsilon(1e-15));
}

TEST_CASE("generator matrices match the basis-ket action") {
  const double t = 0.36;
  for (int m = 0; m <= 3; ++m) {
    for (int site = 0; site <= m; ++site) {
      for (Generator g : {Generator::annihilate, Generator::create, Generator::t_power_plus, Generator::t_power_minus}) {
        const FockOperator op = FockOperator::generator(g, site, m, t);
        for (int n = 0; n <= 3; ++n) {
          const Eigen::MatrixXcd expect = generator_oracle(g, site, n, m, t);
          if (expect.size() == 0) continue;
          CHECK(relative_deviation(op.block(n), expect) <= 1e-15);
        }
      }
    }
  }
}

TEST_CASE("property: unitarity of annihilation and creation") {
  const double t = 0.36;
  for (int m = 0; m <= 3; ++m) {
    for (int n = 0; n <= 3; ++n) {
      for (int site = 0; site <= m; ++site) {
        const FockVector f = random_vector(n + 1, m);
        const FockVector g = random_vector(n, m);
        const FockVector lhs = apply_generator(Generator::annihilate, site, f, t);
        const FockVector rhs = apply_generator(Generator::create, site, g, t);
        CHECK(rel(inner_product(lhs, g, t), inner_product(f, rhs, t)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("property: ultralocal relations on every site pair") {
  const double t = 0.36;
  const int m = 2;
  const std::vector<int> sectors{0, 1, 2, 3};
  for (int l = 0; l <= m; ++l) {
    const auto b = FockOperator::generator(Generator::annihilate, l, m, t);
    const auto bs = FockOperator::generator(Generator::create, l, m, t);
    const auto tp = FockOperator::generator(Generator::t_power_plus, l, m, t);
    const auto tm = FockOperator::generator(Generator::t_power_minus, l, m, t);
    const auto one = FockOperator::scalar(m, 1.0);
    CHECK(operator_deviation(b * bs - cplx(t) * (bs * b), one, sectors) <= 1e-13);
    CHECK(operator_deviation(b * bs - bs * b, tp, sectors) <= 1e-13);
    CHECK(operator_deviation(tp * tm, one, sectors) <= 1e-13);
    CHECK(operator_deviation(tp * b, cplx(1.0 / t) * (b * tp), std::vector<int>{1, 2, 3}) <= 1e-13);
    CHECK(operator_deviation(tp * bs, cplx(t) * (bs * tp), sectors) <= 1e-13);
    for (int k = 0; k <= m; ++k) {
      if (k == l) continue;
      const auto bk = FockOperator::generator(Generator::annihilate, k, m, t);
      const auto bsk = FockOperator::generator(Generator::create, k, m, t);
      const auto tpk = FockOperator::generator(Generator::t_power_plus, k, m, t);
      CHECK(operator_deviation(b * bk, bk * b, std::vector<int>{2, 3}) <= 1e-13);
      CHECK(operator_deviation(b * bsk, bsk * b, sectors) <= 1e-13);
      CHECK(operator_deviation(bs * bsk, bsk * bs, sectors) <= 1e-13);
      CHECK(operator_deviation(tp * bk, bk * tp, std::vector<int>{1, 2, 3}) <= 1e-13);
      CHECK(operator_deviation(tpk * bs, bs * tpk, sectors) <= 1e-13);
    }
  }
}

TEST_CASE("property: annihilation and creation are bounded by (1-t)^(-1/2)") {
  const double t = 0.36;
  const double bound = 1.0 / std::sqrt(1.0 - t);
  for (int m = 0; m <= 3; ++m) {
    for (int n = 1; n <= 3; ++n) {
      for (int site = 0; site <= m; ++site) {
        const auto b = FockOperator::generator(Generator::annihilate, site, m, t);
        const auto bs = FockOperator::generator(Generator::create, site, m, t);
        // operator norm in the weighted inner products: D_target^{1/2} M D_source^{-1/2}
        const Eigen::VectorXd src = weight_diagonal(*enumerate_sector(n, m), t).cwiseSqrt();
        const Eigen::VectorXd lo = weight_diagonal(*enumerate_sector(n - 1, m), t).cwiseSqrt();
        const Eigen::VectorXd hi = weight_diagonal(*enumerate_sector(n + 1, m), t).cwiseSqrt();
        const Eigen::MatrixXcd mb = lo.cast<cplx>().asDiagonal() * b.block(n) * src.cwiseInverse().cast<cplx>().asDiagonal();
        const Eigen::MatrixXcd mbs = hi.cast<cplx>().asDiagonal() * bs.block(n) * src.cwiseInverse().cast<cplx>().asDiagonal();
        CHECK(Eigen::JacobiSVD<Eigen::MatrixXcd>(mb).singularValues()(0) <= bound * (1.0 + 1e-12));
        CHECK(Eigen::JacobiSVD<Eigen::MatrixXcd>(mbs).singularValues()(0) <= bound * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("number operator acts as q^(m+1) t^n") {
  const ModelParams p = ModelParams::defaults(3, 2);
  for (int n = 0; n <= 4; ++n) {
    const FockVector f = random_vector(n, p.m);
    const FockVector g = apply_number_operator(f, p);
    const double expect = std::pow(p.q, p.m + 1) * std::pow(p.t, n);
    CHECK((g.amplitudes() - expect * f.amplitudes()).norm() <= 1e-14 * f.amplitudes().norm());
  }
}

TEST_CASE("Hamiltonian matches the pointwise hopping oracle") {
  for (int m = 0; m <= 4; ++m) {
    const ModelParams p = ModelParams::defaults(m, 3);
    for (int n = 0; n <= 3; ++n) {
      const FockVector f = random_vector(n, m);
      const FockVector a = apply_hamiltonian(f, p);
      const FockVector b = hamiltonian_oracle(f, p);
      CHECK((a.amplitudes() - b.amplitudes()).norm() <= 1e-13 * (1.0 + b.amplitudes().norm()));
    }
  }
}

TEST_CASE("Hamiltonian from generators equals the explicit action") {
  const ModelParams p = ModelParams::defaults(3, 2);
  const double t = p.t;
  auto qnum = [&](int site) {
    const auto tp = FockOperator::generator(Generator::t_power_plus, site, p.m, t);
    return cplx(1.0 / (1.0 - t)) * (FockOperator::scalar(p.m, 1.0) - tp);
  };
  FockOperator h = cplx(p.a_minus) * qnum(0) + cplx(p.a_plus) * qnum(p.m);
  for (int l = 0; l < p.m; ++l) {
    const auto b = FockOperator::generator(Generator::annihilate, l, p.m, t);
    const auto bs = FockOperator::generator(Generator::create, l, p.m, t);
    const auto b1 = FockOperator::generator(Generator::annihilate, l + 1, p.m, t);
    const auto bs1 = FockOperator::generator(Generator::create, l + 1, p.m, t);
    h = h + b * bs1 + bs * b1;
  }
  const auto explicit_h = FockOperator::from_action(p.m, 0, [&](const FockVector& f) { return apply_hamiltonian(f, p); });
  CHECK(operator_deviation(h, explicit_h, std::vector<int>{0, 1, 2, 3}) <= 1e-13);
}

TEST_CASE("property: Hamiltonian is self-adjoint in the weighted inner product") {
  for (int m = 1; m <= 4; ++m) {
    const ModelParams p = ModelParams::defaults(m, 3);
    for (int n = 1; n <= 3; ++n) {
      const SectorPtr s = enumerate_sector(n, m);
      const auto mat = operator_matrix([&](const FockVector& f) { return apply_hamiltonian(f, p); }, s, s).entries;
      const Eigen::MatrixXcd d = weights(n, m, p.t);
      CHECK(relative_deviation(d * mat, mat.adjoint() * d) <= 1e-13);
    }
  }
}

TEST_CASE("n = 1 Hamiltonian is the tridiagonal hopping matrix") {
  const ModelParams p = ModelParams::defaults(4, 1);
  const SectorPtr s = enumerate_sector(1, p.m);
  const auto mat = operator_matrix([&](const FockVector& f) { return apply_hamiltonian(f, p); }, s, s).entries;
  // sector order is site m first, down to site 0
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(5, 5);
  for (int i = 0; i + 1 < 5; ++i) expect(i, i + 1) = expect(i + 1, i) = 1.0;
  expect(0, 0) = p.a_plus;
  expect(4, 4) = p.a_minus;
  CHECK(relative_deviation(mat, expect) <= 1e-15);
}

TEST_CASE("generators reject out-of-range sites") {
  const FockVector f = random_vector(1, 2);
  CHECK_THROWS_AS(apply_generator(Generator::create, 3, f, 0.36), std::invalid_argument);
  CHECK_THROWS_AS(apply_hamiltonian(f, ModelParams::defaults(3, 1)), std::invalid_argument);
}
