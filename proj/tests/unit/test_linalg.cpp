#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dmimo/linalg.hpp"
#include "oracles.hpp"

using namespace dmimo;

namespace {

void check_svd_invariants(const ComplexMatrix& a) {
  const SvdResult d = svd(a);
  const std::size_t k = d.singular_values.size();
  REQUIRE(k == std::min(a.rows(), a.cols()));
  for (std::size_t i = 0; i < k; ++i) {
    CHECK(d.singular_values[i] >= 0);
    if (i > 0) CHECK(d.singular_values[i] <= d.singular_values[i - 1] + 1e-15);
  }
  // reconstruction
  ComplexMatrix us = d.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) us(i, j) *= d.singular_values[j];
  const ComplexMatrix rec = us.multiply(d.v.adjoint());
  double err = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) err += std::norm(rec(i, j) - a(i, j));
  CHECK(std::sqrt(err) <= 1e-9 * std::max(a.frobenius_norm(), 1e-30));
  // orthonormal columns
  for (const ComplexMatrix* m : {&d.u, &d.v}) {
    for (std::size_t c1 = 0; c1 < k; ++c1) {
      for (std::size_t c2 = c1; c2 < k; ++c2) {
        cxd dot(0, 0);
        for (std::size_t i = 0; i < m->rows(); ++i) dot += std::conj((*m)(i, c1)) * (*m)(i, c2);
        CHECK(std::abs(dot - (c1 == c2 ? 1.0 : 0.0)) <= 1e-9);
      }
    }
  }
}

}  // namespace

TEST_CASE("svd identity and diagonal") {
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  auto d = svd(eye);
  CHECK(d.singular_values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.singular_values[1] == doctest::Approx(1.0).epsilon(1e-12));

  ComplexMatrix diag(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = 4.0;
  d = svd(diag);
  CHECK(d.singular_values[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(d.singular_values[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("svd matches gram-matrix eigen oracle on random complex matrices") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 2 + gen() % 5, cols = 2 + gen() % 5;
    const ComplexMatrix a = oracles::random_matrix(gen, rows, cols);
    const SvdResult d = svd(a);
    const auto eig = oracles::hermitian_eigenvalues(a.adjoint().multiply(a));
    for (std::size_t i = 0; i < d.singular_values.size(); ++i) {
      const double expected = std::sqrt(std::max(eig[i], 0.0));
      CHECK(std::abs(d.singular_values[i] - expected) <= 1e-8);
    }
    check_svd_invariants(a);
  }
}

TEST_CASE("svd handles degenerate shapes") {
  std::mt19937 gen(11);
  // rank deficient: duplicate columns
  ComplexMatrix a = oracles::random_matrix(gen, 4, 2);
  std::vector<ComplexMatrix> parts = {a, a};
  check_svd_invariants(ComplexMatrix::hcat(parts));
  // zero matrix
  check_svd_invariants(ComplexMatrix(3, 2));
  // single row / column
  check_svd_invariants(oracles::random_matrix(gen, 1, 5));
  check_svd_invariants(oracles::random_matrix(gen, 5, 1));
  // non-finite rejected
  ComplexMatrix bad(1, 1);
  bad(0, 0) = cxd(std::numeric_limits<double>::quiet_NaN(), 0);
  CHECK_THROWS(svd(bad));
  CHECK_THROWS(svd(ComplexMatrix{}));
}

TEST_CASE("null space basis annihilates and completes") {
  std::mt19937 gen(23);
  const ComplexMatrix a = oracles::random_matrix(gen, 4, 8);
  const ComplexMatrix ns = null_space_basis(a);
  REQUIRE(ns.cols() == 4);  // generic rank 4
  const ComplexMatrix prod = a.multiply(ns);
  CHECK(prod.frobenius_norm() <= 1e-9 * a.frobenius_norm());
  // orthonormal columns
  const ComplexMatrix gram = ns.adjoint().multiply(ns);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-10);
  // full-rank square: empty null space
  CHECK(null_space_basis(oracles::random_matrix(gen, 3, 3)).empty());
}

TEST_CASE("water filling frozen examples") {
  {
    const std::vector<double> eps = {1.0};
    const auto wf = water_fill(eps, 1.0, 1.0);
    CHECK(wf.water_level == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(wf.powers[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wf.rate == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  {
    // grid oracle: maximize log(1+2p) + log(1+(1-p)) over p
    double best = -1, best_p = 0;
    for (int i = 0; i <= 10000; ++i) {
      const double p = double(i) / 10000.0;
      const double r = std::log(1 + 2 * p) + std::log(1 + (1 - p));
      if (r > best) {
        best = r;
        best_p = p;
      }
    }
    const std::vector<double> eps = {2.0, 1.0};
    const auto wf = water_fill(eps, 1.0, 1.0);
    CHECK(wf.water_level == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(wf.powers[0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(wf.powers[1] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(wf.rate == doctest::Approx(1.1394).epsilon(1e-4));
    CHECK(std::abs(wf.rate - best) <= 1e-7);
    CHECK(std::abs(wf.powers[0] - best_p) <= 2e-4);
  }
  {
    // weak second channel stays off; grid oracle confirms
    double best = -1;
    for (int i = 0; i <= 10000; ++i) {
      const double p = double(i) / 10000.0;
      best = std::max(best, std::log(1 + p) + std::log(1 + 0.1 * (1 - p)));
    }
    const std::vector<double> eps = {1.0, 0.1};
    const auto wf = water_fill(eps, 1.0, 1.0);
    CHECK(wf.active == 1);
    CHECK(wf.water_level == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(wf.water_level < 10.0);  // 1/eps_2 confirms the exclusion
    CHECK(wf.powers[1] == 0.0);
    CHECK(wf.rate == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(std::abs(wf.rate - best) <= 1e-7);
  }
}

TEST_CASE("water filling rejects bad input") {
  const std::vector<double> eps = {1.0};
  CHECK_THROWS(water_fill(eps, -1.0, 1.0));
  const std::vector<double> unsorted = {1.0, 2.0};
  CHECK_THROWS(water_fill(unsorted, 1.0, 1.0));
  const std::vector<double> nonpos = {1.0, 0.0};
  CHECK_THROWS(water_fill(nonpos, 1.0, 1.0));
}

TEST_CASE("water filling KKT property") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> unif(0.05, 8.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> eps(1 + gen() % 6);
    for (double& e : eps) e = unif(gen);
    std::sort(eps.rbegin(), eps.rend());
    const double budget = unif(gen);
    const auto wf = water_fill(eps, budget, 1.0);
    double total = 0;
    for (std::size_t z = 0; z < eps.size(); ++z) {
      total += wf.powers[z];
      if (wf.powers[z] > 0)
        CHECK(std::abs(wf.powers[z] - (wf.water_level - 1.0 / eps[z])) <= 1e-9);
      else
        CHECK(wf.water_level <= 1.0 / eps[z] + 1e-9);
    }
    CHECK(std::abs(total - budget) <= 1e-9 * std::max(budget, 1.0));
    CHECK(wf.rate >= 0);
  }
}

TEST_CASE("mimo capacity closed forms and oracle") {
  CHECK(mimo_capacity(ComplexMatrix::identity(2), 2.0, 1.0) ==
        doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(mimo_capacity(ComplexMatrix(3, 4), 5.0, 1.0) == 0.0);
  CHECK(mimo_capacity(ComplexMatrix::identity(2), 0.0, 1.0) == 0.0);

  std::mt19937 gen(43);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = oracles::random_matrix(gen, 2, 3);
    const double cap = mimo_capacity(h, 1.0, 1.0);
    const double grid = oracles::capacity_grid_oracle(h, 1.0, 1.0);
    CHECK(std::abs(cap - grid) <= 1e-3);
  }
}

TEST_CASE("mimo capacity is concave nondecreasing in power") {
  std::mt19937 gen(57);
  const ComplexMatrix h = oracles::random_matrix(gen, 3, 4);
  std::vector<double> caps;
  for (int i = 0; i <= 40; ++i) caps.push_back(mimo_capacity(h, 0.1 * i, 1.0));
  for (std::size_t i = 1; i < caps.size(); ++i) CHECK(caps[i] >= caps[i - 1] - 1e-12);
  for (std::size_t i = 1; i + 1 < caps.size(); ++i)
    CHECK(caps[i + 1] - 2 * caps[i] + caps[i - 1] <= 1e-9);
}

TEST_CASE("mimo capacity grows when columns are appended") {
  std::mt19937 gen(61);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = oracles::random_matrix(gen, 2, 4);
    const ComplexMatrix extra = oracles::random_matrix(gen, 2, 2);
    std::vector<ComplexMatrix> parts = {h, extra};
    const ComplexMatrix wider = ComplexMatrix::hcat(parts);
    CHECK(mimo_capacity(wider, 2.0, 1.0) >= mimo_capacity(h, 2.0, 1.0) - 1e-12);
  }
}

TEST_CASE("rate derivative") {
  // single gain: BT eps / (1 + P eps)
  ComplexMatrix h(1, 1);
  h(0, 0) = std::sqrt(3.0);
  for (double p : {0.2, 1.0, 4.0})
    CHECK(rate_derivative(h, p, 2.0) == doctest::Approx(2.0 * 3.0 / (1 + p * 3.0)).epsilon(1e-9));

  // frozen two-channel case: BT / mu with mu = 1.25
  ComplexMatrix h2(2, 2);
  h2(0, 0) = std::sqrt(2.0);
  h2(1, 1) = 1.0;
  CHECK(rate_derivative(h2, 1.0, 1.0) == doctest::Approx(0.8).epsilon(1e-9));

  // finite differences
  std::mt19937 gen(71);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix hr = oracles::random_matrix(gen, 2, 3);
    const double p = 1.0, eps_fd = 1e-5;
    const double fd =
        (mimo_capacity(hr, p + eps_fd, 1.0) - mimo_capacity(hr, p - eps_fd, 1.0)) / (2 * eps_fd);
    const double an = rate_derivative(hr, p, 1.0);
    CHECK(std::abs(fd - an) <= 1e-4 * std::abs(an));
  }
  CHECK_THROWS(rate_derivative(h2, 0.0, 1.0));
  CHECK_THROWS(rate_derivative(h2, -1.0, 1.0));
}

TEST_CASE("capacity covariance traces to the budget") {
  std::mt19937 gen(83);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = oracles::random_matrix(gen, 2, 5);
    const double p = 0.5 + 0.5 * trial;
    const ComplexMatrix cov = capacity_covariance(h, p);
    double trace = 0;
    for (std::size_t i = 0; i < cov.rows(); ++i) trace += cov(i, i).real();
    CHECK(trace == doctest::Approx(p).epsilon(1e-9));
    // achieves the capacity it claims
    const ComplexMatrix hx = h.multiply(cov).multiply(h.adjoint());
    ComplexMatrix m = ComplexMatrix::identity(h.rows());
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.rows(); ++j) m(i, j) += hx(i, j);
    CHECK(oracles::lu_logdet(m) == doctest::Approx(mimo_capacity(h, p, 1.0)).epsilon(1e-9));
  }
}
