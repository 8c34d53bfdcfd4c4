#pragma once

#include <array>
#include <optional>

#include "lgt/core.hpp"

namespace lgt {

enum class Representation { electric, magnetic };

/// Minimal periodic cell: three independent loop fluxes ("rotators"), plus
/// optionally the two winding fluxes ("strings") and static charges at the
/// three non-origin sites.
struct PlaquetteModel {
  Representation rep = Representation::electric;
  int l = 1;        ///< flux truncation, registers span [-l, l]
  int L = 1;        ///< group resolution; ignored by the electric builder
  double g2 = 1.0;  ///< squared coupling
  double a = 1.0;   ///< lattice spacing
  bool include_strings = false;
  /// static charges at sites (1,0), (0,1), (1,1); requires include_strings
  std::array<int, 3> static_charges{0, 0, 0};
  /// electric representation only: use cyclic ladder operators (the exact
  /// group algebra at truncation l), for duality cross-checks
  bool cyclic = false;
};

struct HamiltonianParts {
  SparseCx electric;   ///< flux-energy part (diagonal in the electric basis)
  SparseCx magnetic;   ///< plaquette-sum part (diagonal in the magnetic basis)
  double dropped_constant = 0.0;  ///< energy offset removed with the squared
                                  ///< flux replacement (magnetic builds)
  std::int64_t dim = 0;

  SparseCx hamiltonian() const { return SparseCx(electric + magnetic); }
};

HamiltonianParts build_plaquette(const PlaquetteModel& model);

/// Shared assembly used by the plaquette, matter and torus builders: a
/// representation is a choice of operator suite on one register.
struct RegisterSuite {
  SparseCx linear;    ///< flux operator (Y): diag(r) or its conjugate image
  SparseCx squared;   ///< squared flux (X): diag(r^2) or conjugate image
  SparseCx ladder;    ///< plaquette/hop insertion (T): ladder or clock phase
  double dropped_per_squared = 0.0;  ///< offset dropped by each `squared`
};

RegisterSuite make_register_suite(const PlaquetteModel& model);

}  // namespace lgt
