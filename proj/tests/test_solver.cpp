#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lgt/hamiltonian.hpp"
#include "lgt/operators.hpp"
#include "lgt/solver.hpp"

using namespace lgt;

namespace {

SparseCx random_hermitian(int n, std::uint64_t seed, double density = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, u(rng));
    for (int j = i + 1; j < n; ++j) {
      if (u(rng) > 2.0 * density - 1.0) continue;
      cplx v(u(rng), u(rng));
      t.emplace_back(i, j, v);
      t.emplace_back(j, i, std::conj(v));
    }
  }
  SparseCx m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

TEST_CASE("dense path solves a diagonal matrix exactly") {
  const int n = 40;
  SparseCx m(n, n);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, static_cast<double>(n - i));
  m.setFromTriplets(t.begin(), t.end());
  auto res = lowest_eigenpairs(m, 3);
  CHECK(res.used_dense);
  CHECK(res.values(0) == doctest::Approx(1.0));
  CHECK(res.values(1) == doctest::Approx(2.0));
  CHECK(res.values(2) == doctest::Approx(3.0));
}

TEST_CASE("iterative path agrees with the dense solver") {
  SolverOptions it;
  it.force_iterative = true;
  for (std::uint64_t seed : {7ULL, 21ULL}) {
    for (int n : {120, 400}) {
      auto m = random_hermitian(n, seed);
      auto dense = lowest_eigenpairs(m, 1);
      auto krylov = lowest_eigenpairs(m, 1, it);
      REQUIRE(krylov.converged);
      CHECK(std::abs(dense.values(0) - krylov.values(0)) < 1e-10);
      // same state up to phase
      CHECK(std::abs(std::abs(dense.vectors.col(0).dot(krylov.vectors.col(0))) -
                     1.0) < 1e-8);
    }
  }
}

TEST_CASE("iterative path matches on a physical build") {
  PlaquetteModel model;
  model.l = 3;
  model.g2 = 0.5;
  auto parts = build_plaquette(model);
  auto h = parts.hamiltonian();
  auto dense = lowest_eigenpairs(h, 1);
  SolverOptions it;
  it.force_iterative = true;
  auto krylov = lowest_eigenpairs(h, 1, it);
  CHECK(std::abs(dense.values(0) - krylov.values(0)) < 1e-10);
}

TEST_CASE("multiple eigenpairs with a degenerate ground level") {
  const int n = 300;
  SparseCx m(n, n);
  std::vector<Triplet> t;
  t.emplace_back(0, 0, -5.0);
  t.emplace_back(1, 1, -5.0);  // exact double degeneracy
  for (int i = 2; i < n; ++i) t.emplace_back(i, i, -4.0 + 0.01 * i);
  // small off-diagonal noise that preserves the 2d ground space
  for (int i = 2; i + 1 < n; ++i) {
    t.emplace_back(i, i + 1, 0.003);
    t.emplace_back(i + 1, i, 0.003);
  }
  m.setFromTriplets(t.begin(), t.end());
  SolverOptions it;
  it.force_iterative = true;
  auto res = lowest_eigenpairs(m, 3, it);
  REQUIRE(res.converged);
  CHECK(res.values(0) == doctest::Approx(-5.0).epsilon(1e-10));
  CHECK(res.values(1) == doctest::Approx(-5.0).epsilon(1e-10));
  CHECK(res.values(2) > -4.2);
  // the two ground vectors span the right subspace and are orthonormal
  CHECK(std::abs(res.vectors.col(0).dot(res.vectors.col(1))) < 1e-8);
}

TEST_CASE("fixed seed makes the iteration deterministic") {
  auto m = random_hermitian(350, 99);
  SolverOptions it;
  it.force_iterative = true;
  auto a = lowest_eigenpairs(m, 1, it);
  auto b = lowest_eigenpairs(m, 1, it);
  CHECK(a.values(0) == b.values(0));
  CHECK((a.vectors - b.vectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.matvecs == b.matvecs);
}
