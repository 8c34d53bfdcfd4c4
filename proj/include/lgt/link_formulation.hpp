#pragma once

#include "lgt/hamiltonian.hpp"

namespace lgt {

/// Alternative build of the periodic cell that keeps five link registers
/// instead of loop and string variables.  The three remaining link fields are
/// fixed by the divergence constraints and substituted into the electric
/// energy, so the basis is the product of five flux registers in [-l, l]:
///
///   0: (0,0) x-link   1: (0,0) y-link   2: (0,1) x-link
///   3: (1,0) y-link   4: (1,1) x-link
///
/// The magnetic coupling is the four elementary loop products with the
/// substituted links' phase operators replaced by identities.  Only l, g2 and
/// a of the model are used; static charges must be zero.
HamiltonianParts build_link_formulation(const PlaquetteModel& model);

/// Selection matrix (dim x sector_dim) whose unit columns pick the basis
/// states with both winding sums zero: r0 + r2 == 0 and r1 + r3 == 0.  Both
/// sums commute with the Hamiltonian, and conjugating with the selector
/// restricts to the sector that corresponds to the three-loop build without
/// strings.
SparseCx zero_winding_selector(int l);

}  // namespace lgt
