#pragma once

#include <vector>

#include "lgt/core.hpp"
#include "lgt/hamiltonian.hpp"

namespace lgt {

/// Four staggered fermion sites on the periodic cell coupled to five flux
/// registers: the three loop registers plus the two boundary strings.
struct MatterModel {
  Representation rep = Representation::electric;
  int l = 1;
  int L = 2;  // series order, used by the series representation only
  double g2 = 1.0;
  double a = 1.0;
  double mass = 0.0;
  double kappa = 1.0;
  bool cyclic = false;  // wrap-around ladders in the unsquared build
};

struct MatterSystem {
  SparseCx hamiltonian;
  SparseCx magnetic_part;  // for the plaquette observable
  SparseCx total_charge;
  double dropped_constant = 0.0;
  std::int64_t dim = 0;
};

/// Ladder and occupation operators of a Jordan-Wigner spin chain.
struct FermionOps {
  std::vector<SparseCx> lower;   // string-dressed annihilation operators
  std::vector<SparseCx> number;  // occupation per site
  std::int64_t dim = 0;
};

FermionOps jw_chain(int sites);

MatterSystem build_matter_plaquette(const MatterModel& model);

}  // namespace lgt
