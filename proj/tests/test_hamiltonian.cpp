#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "lgt/core.hpp"
#include "lgt/hamiltonian.hpp"
#include "lgt/solver.hpp"

using namespace lgt;

namespace {

double plaquette_value(const HamiltonianParts& parts, const VectorCx& gs,
                       double g2) {
  cplx e = gs.dot(parts.magnetic * gs);
  return -(g2 / 4.0) * e.real();
}

Eigen::VectorXd full_spectrum(const SparseCx& h) {
  Eigen::SelfAdjointEigenSolver<DenseCx> es{DenseCx(h)};
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("both parts are hermitian in both representations") {
  for (auto rep : {Representation::electric, Representation::magnetic}) {
    PlaquetteModel model;
    model.rep = rep;
    model.l = 2;
    model.L = 4;
    model.g2 = 0.3;
    model.include_strings = true;
    model.static_charges = {1, -1, 0};
    auto parts = build_plaquette(model);
    CHECK(approx_hermitian(parts.electric));
    CHECK(approx_hermitian(parts.magnetic));
  }
}

TEST_CASE("unsquared-representation build does not depend on the series order") {
  PlaquetteModel a;
  a.rep = Representation::electric;
  a.l = 2;
  a.g2 = 0.7;
  auto pa = build_plaquette(a);
  auto b = a;
  b.L = 9;
  auto pb = build_plaquette(b);
  CHECK(max_abs(SparseCx(pa.electric - pb.electric)) == 0.0);
  CHECK(max_abs(SparseCx(pa.magnetic - pb.magnetic)) == 0.0);
}

TEST_CASE("series-representation electric part has an empty diagonal") {
  PlaquetteModel model;
  model.rep = Representation::magnetic;
  model.l = 2;
  model.L = 6;
  model.g2 = 1.0;
  auto parts = build_plaquette(model);
  DenseCx dense(parts.electric);
  CHECK(dense.diagonal().cwiseAbs().maxCoeff() < 1e-12);

  model.l = 1;
  model.L = 3;
  model.include_strings = true;  // neutral strings keep the diagonal empty
  auto with_strings = build_plaquette(model);
  DenseCx ds(with_strings.electric);
  CHECK(ds.diagonal().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("wrap-around bases make the two representations isospectral") {
  for (int l : {1, 2}) {
    PlaquetteModel e;
    e.rep = Representation::electric;
    e.l = l;
    e.L = l;
    e.g2 = 0.45;
    e.cyclic = true;
    auto pe = build_plaquette(e);

    PlaquetteModel m = e;
    m.rep = Representation::magnetic;
    m.cyclic = false;
    auto pm = build_plaquette(m);
    CHECK(pm.dropped_constant ==
          doctest::Approx(2.0 * m.g2 * l * (l + 1)).epsilon(1e-14));

    auto se = full_spectrum(pe.hamiltonian());
    auto sm = full_spectrum(pm.hamiltonian());
    REQUIRE(se.size() == sm.size());
    double worst = 0.0;
    for (int i = 0; i < se.size(); ++i)
      worst = std::max(worst,
                       std::abs(se(i) - (sm(i) + pm.dropped_constant)));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("isospectrality survives strings and static charges") {
  PlaquetteModel e;
  e.rep = Representation::electric;
  e.l = 1;
  e.L = 1;
  e.g2 = 0.8;
  e.cyclic = true;
  e.include_strings = true;
  e.static_charges = {1, -1, 0};
  auto pe = build_plaquette(e);

  PlaquetteModel m = e;
  m.rep = Representation::magnetic;
  m.cyclic = false;
  auto pm = build_plaquette(m);
  CHECK(pm.dropped_constant ==
        doctest::Approx(8.0 / 3.0 * m.g2 * m.l * (m.l + 1)).epsilon(1e-14));

  auto se = full_spectrum(pe.hamiltonian());
  auto sm = full_spectrum(pm.hamiltonian());
  double worst = 0.0;
  for (int i = 0; i < se.size(); ++i)
    worst =
        std::max(worst, std::abs(se(i) - (sm(i) + pm.dropped_constant)));
  CHECK(worst < 1e-10);
}

TEST_CASE("frozen ground-state plaquette values, unsquared representation") {
  struct Case {
    int l;
    double box;
  };
  // dense references for weak coupling 1/g^2 = 10
  for (auto c : {Case{2, 0.8231628}, Case{3, 0.8964508}}) {
    PlaquetteModel model;
    model.rep = Representation::electric;
    model.l = c.l;
    model.g2 = 0.1;
    auto parts = build_plaquette(model);
    auto res = ground_state(parts.hamiltonian());
    CHECK(plaquette_value(parts, res.vectors.col(0), model.g2) ==
          doctest::Approx(c.box).epsilon(5e-7));
  }
}

TEST_CASE("frozen ground-state plaquette value, series representation") {
  PlaquetteModel model;
  model.rep = Representation::magnetic;
  model.l = 4;
  model.L = 6;
  model.g2 = 0.1;
  auto parts = build_plaquette(model);
  auto res = ground_state(parts.hamiltonian());
  CHECK(plaquette_value(parts, res.vectors.col(0), model.g2) ==
        doctest::Approx(0.9563187).epsilon(5e-7));
}

TEST_CASE("frozen extremal magnetic energy at l = 1") {
  // lowest eigenvalue of the bare magnetic term with 2 g^2 a^2 = 1
  PlaquetteModel model;
  model.l = 1;
  model.g2 = 0.5;
  auto parts = build_plaquette(model);
  auto res = ground_state(parts.magnetic);
  CHECK(res.values(0) == doctest::Approx(-5.056759).epsilon(2e-6));
}

TEST_CASE("ground-state weights are symmetric under flux reversal") {
  PlaquetteModel model;
  model.rep = Representation::electric;
  model.l = 2;
  model.g2 = 0.7;
  auto parts = build_plaquette(model);
  auto res = ground_state(parts.hamiltonian());
  RegisterBasis basis(model.l, 3);
  const auto& gs = res.vectors.col(0);
  for (std::int64_t i = 0; i < basis.dim(); ++i) {
    int idx[3];
    basis.decode(i, idx);
    int mirror[3];
    for (int r = 0; r < 3; ++r) mirror[r] = -idx[r];
    std::int64_t j = basis.index(mirror);
    CHECK(std::abs(std::abs(gs(i)) - std::abs(gs(j))) < 1e-10);
  }
}

TEST_CASE("invalid models are rejected") {
  PlaquetteModel model;
  model.l = 0;
  CHECK_THROWS(build_plaquette(model));
  model.l = 2;
  model.rep = Representation::magnetic;
  model.L = 1;  // series order below the register size
  CHECK_THROWS(build_plaquette(model));
}
