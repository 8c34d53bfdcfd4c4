#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "lgt/analysis.hpp"
#include "lgt/hamiltonian.hpp"
#include "lgt/operators.hpp"
#include "lgt/solver.hpp"

using namespace lgt;

namespace {

VectorCx ground_of(const PlaquetteModel& model) {
  auto parts = build_plaquette(model);
  return ground_state(parts.hamiltonian()).vectors.col(0);
}

}  // namespace

TEST_CASE("plaquette expectation of an explicit diagonal operator") {
  SparseCx d(2, 2);
  d.insert(0, 0) = -3.0;
  d.insert(1, 1) = 1.0;
  VectorCx v(2);
  v << 1.0, 0.0;
  // -(g^2/4) * <v|d|v> = -(0.5/4)*(-3)
  CHECK(plaquette_expectation(v, d, 0.5) == doctest::Approx(0.375));
  VectorCx wrong(3);
  CHECK_THROWS(plaquette_expectation(wrong, d, 0.5));
}

TEST_CASE("windowed transform: unitarity and the 3x3 kernel") {
  DenseCx w = dft_window(1, 1);
  const double s = 1.0 / std::sqrt(3.0);
  for (int j = -1; j <= 1; ++j)
    for (int k = -1; k <= 1; ++k) {
      cplx expected =
          s * std::exp(cplx(0.0, 2.0 * std::numbers::pi * j * k / 3.0));
      CHECK(std::abs(w(j + 1, k + 1) - expected) < 1e-14);
    }

  DenseCx f3 = truncated_dft3(1, 1);
  DenseCx unit = f3.adjoint() * f3;
  CHECK((unit - DenseCx::Identity(27, 27)).cwiseAbs().maxCoeff() < 1e-12);

  // sub-window of a bigger group: contraction, not unitary
  DenseCx g3 = truncated_dft3(1, 3);
  Eigen::JacobiSVD<DenseCx> svd(g3);
  CHECK(svd.singularValues().maxCoeff() <= 1.0 + 1e-12);
  CHECK(svd.singularValues().maxCoeff() < 0.999);
}

TEST_CASE("matrix-free transform application matches the dense kernel") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  const int l = 2, L = 5;
  const int dim = (2 * l + 1) * (2 * l + 1) * (2 * l + 1);
  VectorCx v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(n(rng), n(rng));
  VectorCx direct = truncated_dft3(l, L) * v;
  VectorCx fast = apply_truncated_dft3(v, l, L);
  CHECK((direct - fast).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transform fidelity is exactly one at the full group size") {
  PlaquetteModel e;
  e.rep = Representation::electric;
  e.l = 2;
  e.L = 2;
  e.g2 = 0.6;
  e.cyclic = true;
  PlaquetteModel b = e;
  b.rep = Representation::magnetic;
  b.cyclic = false;
  double f = fourier_fidelity(ground_of(e), ground_of(b), 2, 2);
  CHECK(f == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("frozen transform fidelity at the smallest truncation") {
  PlaquetteModel e;
  e.rep = Representation::electric;
  e.l = 1;
  e.g2 = 1.0;
  PlaquetteModel b = e;
  b.rep = Representation::magnetic;
  b.L = 2;
  double f = fourier_fidelity(ground_of(e), ground_of(b), 1, 2);
  CHECK(f == doctest::Approx(0.697300169710).epsilon(1e-9));
}

TEST_CASE("fidelity maximisation reports value, grid and ties") {
  auto scan = maximize_fourier_fidelity(1, 1.0, {2, 3, 4, 5});
  CHECK(scan.best_value == doctest::Approx(0.697300169710).epsilon(1e-9));
  REQUIRE(scan.best_L.size() == 1);
  CHECK(scan.best_L[0] == 2);
  for (const auto& p : scan.points) {
    CHECK(p.value >= 0.0);
    CHECK(p.value <= 1.0 + 1e-12);
  }
  // parallel execution must not change any reported number
  auto par = maximize_fourier_fidelity(1, 1.0, {2, 3, 4, 5}, {}, 2);
  for (std::size_t i = 0; i < scan.points.size(); ++i)
    CHECK(par.points[i].value == scan.points[i].value);
}

TEST_CASE("sequence fidelity of an embedded state is one") {
  PlaquetteModel e;
  e.rep = Representation::electric;
  e.l = 1;
  e.g2 = 1.0;
  VectorCx small = ground_of(e);
  VectorCx large = VectorCx::Zero(125);
  for (int j1 = 0; j1 < 3; ++j1)
    for (int j2 = 0; j2 < 3; ++j2)
      for (int j3 = 0; j3 < 3; ++j3)
        large(((j1 + 1) * 5 + (j2 + 1)) * 5 + (j3 + 1)) =
            small((j1 * 3 + j2) * 3 + j3);
  CHECK(sequence_fidelity(small, large, 2) == doctest::Approx(1.0));
}

TEST_CASE("frozen sequence fidelity between neighbouring truncations") {
  PlaquetteModel e1;
  e1.rep = Representation::electric;
  e1.l = 1;
  e1.g2 = 1.0;
  PlaquetteModel e2 = e1;
  e2.l = 2;
  double f = sequence_fidelity(ground_of(e1), ground_of(e2), 2);
  CHECK(f == doctest::Approx(0.992253469896).epsilon(1e-9));
}

TEST_CASE("optimal series order: frozen detector outcomes") {
  auto p1 = find_L_opt(3, 1.0, default_L_grid(3, 12));
  CHECK(p1.L_opt == 4);
  CHECK(p1.method == LOptMethod::frozen);
  CHECK(p1.frozen);

  auto p2 = find_L_opt(3, 0.1, default_L_grid(3, 12));
  CHECK(p2.L_opt == 6);
  CHECK(p2.method == LOptMethod::kink);

  auto p3 = find_L_opt(3, 0.04, default_L_grid(3, 12));
  CHECK(p3.L_opt == 9);
  CHECK(p3.method == LOptMethod::kink);

  auto p4 = find_L_opt(1, 0.04, default_L_grid(1, 10));
  CHECK(p4.L_opt == 2);
  CHECK(p4.frozen);

  for (double f : p2.infidelity) {
    CHECK(f >= -1e-12);
    CHECK(f <= 1.0 + 1e-12);
  }
}

TEST_CASE("optimal series order rejects malformed grids") {
  CHECK_THROWS(find_L_opt(2, 1.0, {}));
  CHECK_THROWS(find_L_opt(2, 1.0, {4, 5, 6}));     // must start at l+1
  CHECK_THROWS(find_L_opt(2, 1.0, {3, 5, 4}));     // must ascend
}

TEST_CASE("coupling sweep places the usable-fidelity peak at order one") {
  std::vector<double> g2s = {4.0, 2.0, 1.0, 0.5, 0.25, 0.125, 0.0625};
  std::vector<int> Ls;
  for (int L = 3; L <= 12; ++L) Ls.push_back(L);
  auto gm = find_gm(2, g2s, Ls);
  CHECK(gm.g2_m == doctest::Approx(0.5));
  CHECK(gm.g_m == doctest::Approx(std::sqrt(0.5)));
  CHECK_FALSE(gm.ambiguous);
  CHECK(gm.best_fidelity[3] == doctest::Approx(0.9891490490).epsilon(1e-8));
  CHECK(gm.best_fidelity[2] == doctest::Approx(0.8241346688).epsilon(1e-8));

  auto single = find_gm(2, {1.0}, {3});
  CHECK(single.ambiguous);
  CHECK(single.g2_m == doctest::Approx(1.0));
}

TEST_CASE("ladder-variant ground profiles: frozen references") {
  // l = 2 window inside a [-4, 4] register
  auto cy = truncation_profile(2, 4, 1.0, TruncationVariant::cyclic);
  CHECK(cy.energy == doctest::Approx(-40.0).epsilon(1e-10));
  const double expect_cy[] = {0.00137174, 0.03703704, 0.17146776, 0.47050754,
                              1.0};
  for (int s = 0; s <= 4; ++s)
    CHECK(cy.cumulative(s) == doctest::Approx(expect_cy[s]).epsilon(1e-6));

  auto band = truncation_profile(2, 4, 1.0, TruncationVariant::band);
  CHECK(band.energy == doctest::Approx(-36.8491437249).epsilon(1e-8));
  const double expect_band[] = {0.04629883, 0.65537180, 1.0, 1.0, 1.0};
  for (int s = 0; s <= 4; ++s)
    CHECK(band.cumulative(s) == doctest::Approx(expect_band[s]).epsilon(1e-6));

  auto wr = truncation_profile(2, 4, 1.0, TruncationVariant::wrap_removed);
  CHECK(wr.energy == doctest::Approx(-39.0885421084).epsilon(1e-8));
  const double expect_wr[] = {0.00965195, 0.20551924, 0.60486955, 0.91663152,
                              1.0};
  for (int s = 0; s <= 4; ++s)
    CHECK(wr.cumulative(s) == doctest::Approx(expect_wr[s]).epsilon(1e-6));

  // cumulative populations concentrate low shells strictly more once any
  // part of the ladder is discarded
  for (int s = 0; s < 4; ++s) {
    CHECK(band.cumulative(s) > wr.cumulative(s));
    CHECK(wr.cumulative(s) > cy.cumulative(s));
  }
}

TEST_CASE("full-window ladder keeps band and wrap-removed variants equal") {
  auto band = truncation_profile(3, 3, 0.8, TruncationVariant::band);
  auto wr = truncation_profile(3, 3, 0.8, TruncationVariant::wrap_removed);
  CHECK(band.energy == doctest::Approx(wr.energy).epsilon(1e-12));
  for (int s = 0; s <= 3; ++s)
    CHECK(band.shell_population(s) ==
          doctest::Approx(wr.shell_population(s)).epsilon(1e-10));
}

TEST_CASE("out-of-window population falls as the window-quality ratio grows") {
  // fixed register size, leak decreasing in the window radius and with
  // weaker coupling
  double grid[3][3];
  const double g2s[3] = {1.0, 0.1, 0.01};
  for (int a = 0; a < 3; ++a)
    for (int l = 1; l <= 3; ++l) grid[a][l - 1] = window_leakage(l, 5, g2s[a]);
  for (int a = 0; a < 3; ++a) {
    CHECK(grid[a][0] > grid[a][1]);
    CHECK(grid[a][1] > grid[a][2]);
  }
  for (int l = 0; l < 3; ++l) {
    CHECK(grid[0][l] > grid[1][l]);
    CHECK(grid[1][l] > grid[2][l]);
  }
  CHECK(grid[0][0] == doctest::Approx(7.79835283e-01).epsilon(1e-6));
  CHECK(grid[2][2] == doctest::Approx(1.29969447e-07).epsilon(1e-4));
}

TEST_CASE("observable monotonicity across truncations") {
  // weak coupling: unsquared-representation value climbs with the window
  double prev = 0.0;
  for (int l = 1; l <= 5; ++l) {
    PlaquetteModel m;
    m.rep = Representation::electric;
    m.l = l;
    m.g2 = 0.1;
    auto parts = build_plaquette(m);
    auto res = ground_state(parts.hamiltonian());
    double box =
        plaquette_expectation(res.vectors.col(0), parts.magnetic, m.g2);
    if (l > 1) CHECK(box >= prev - 1e-12);
    prev = box;
  }
  // strong coupling: series-representation value falls with the window
  prev = 2.0;
  for (int l = 1; l <= 4; ++l) {
    PlaquetteModel m;
    m.rep = Representation::magnetic;
    m.l = l;
    m.L = 7;
    m.g2 = 10.0;
    auto parts = build_plaquette(m);
    auto res = ground_state(parts.hamiltonian());
    double box =
        plaquette_expectation(res.vectors.col(0), parts.magnetic, m.g2);
    CHECK(box <= prev + 1e-12);
    prev = box;
  }
}

TEST_CASE("representations agree on the observable at the full group size") {
  PlaquetteModel e;
  e.rep = Representation::electric;
  e.l = 2;
  e.L = 2;
  e.g2 = 0.45;
  e.cyclic = true;
  auto pe = build_plaquette(e);
  auto re = ground_state(pe.hamiltonian());
  double box_e = plaquette_expectation(re.vectors.col(0), pe.magnetic, e.g2);

  PlaquetteModel b = e;
  b.rep = Representation::magnetic;
  b.cyclic = false;
  auto pb = build_plaquette(b);
  auto rb = ground_state(pb.hamiltonian());
  double box_b = plaquette_expectation(rb.vectors.col(0), pb.magnetic, b.g2);
  CHECK(std::abs(box_e - box_b) < 1e-10);
}

TEST_CASE("plaquette scans: determinism, composition, failure capture") {
  CHECK(scan_plaquette(Representation::electric, {}, {}, {}).empty());

  auto single =
      scan_plaquette(Representation::electric, {2}, {}, {0.5});
  REQUIRE(single.size() == 1);
  PlaquetteModel m;
  m.rep = Representation::electric;
  m.l = 2;
  m.g2 = 0.5;
  auto parts = build_plaquette(m);
  auto res = ground_state(parts.hamiltonian());
  CHECK(single[0].ok);
  CHECK(single[0].energy == doctest::Approx(res.values(0)).epsilon(1e-12));
  CHECK(single[0].box ==
        doctest::Approx(plaquette_expectation(res.vectors.col(0),
                                              parts.magnetic, 0.5))
            .epsilon(1e-12));

  auto serial = scan_plaquette(Representation::magnetic, {1, 2}, {3, 4},
                               {1.0, 0.5});
  auto parallel = scan_plaquette(Representation::magnetic, {1, 2}, {3, 4},
                                 {1.0, 0.5}, {}, 3);
  REQUIRE(serial.size() == 8);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].l == parallel[i].l);
    CHECK(serial[i].energy == parallel[i].energy);
    CHECK(serial[i].box == parallel[i].box);
  }

  auto bad = scan_plaquette(Representation::electric, {0, 1}, {}, {1.0});
  REQUIRE(bad.size() == 2);
  CHECK_FALSE(bad[0].ok);
  CHECK_FALSE(bad[0].error.empty());
  CHECK(bad[1].ok);
}

TEST_CASE("resource comparison bookkeeping on a cheap reference") {
  auto cmp = compare_resources(0.1, 4, 0.05, 6, 2.0, 4);
  CHECK(cmp.reference_box == doctest::Approx(0.9296493918).epsilon(1e-6));
  for (const auto& e : cmp.curves) {
    CHECK(e.states == RegisterBasis(e.l, 3).dim());
    CHECK(e.rel_err >= 0.0);
  }
  // with a 5% bar at this coupling every strategy reaches the target
  REQUIRE(cmp.minimal.size() == 3);
  for (const auto& e : cmp.minimal) CHECK(e.reached);
}
