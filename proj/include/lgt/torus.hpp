#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lgt/core.hpp"

namespace lgt {

enum class MatterStatistics { fermionic, bosonic };
enum class LinkAxis { x, y };

/// Periodic N_x x N_y lattice after solving the divergence constraint: one
/// flux-loop register per plaquette (the loop at (0, N_y-1) is fixed to zero
/// and dropped), two boundary strings, and one matter register per site.
/// Charge corrections follow the path that runs first horizontally along the
/// bottom row and then vertically up the column of the charge.
struct TorusModel {
  int nx = 2;
  int ny = 2;
  MatterStatistics statistics = MatterStatistics::fermionic;
  int l = 1;  ///< flux registers span [-l, l]
  double g2 = 1.0;
  double a = 1.0;
  double mass = 0.0;
  double kappa = 1.0;
  int boson_max_occupation = 2;
  /// Per-site background charge, row-major with y outer (site (x,y) at index
  /// y*nx + x).  Empty means all zero.
  std::vector<int> static_charges;
};

/// One named factor of a product term.  Site-attached operators carry lattice
/// coordinates; the two boundary strings do not.  A negative power means the
/// adjoint power of a ladder operator.
///
/// Vocabulary: "R" loop flux, "Rx"/"Ry" string flux, "P" loop lowering,
/// "Px"/"Py" string lowering, "n" matter occupation, "psi"/"psi_dag" matter
/// annihilation/creation.
struct OpFactor {
  std::string op;
  int x = -1;
  int y = -1;
  int power = 1;
};

struct Term {
  cplx coefficient;
  std::vector<OpFactor> factors;  ///< empty list = constant times identity
};

struct TermList {
  std::vector<Term> terms;
};

/// Linear combination of commuting diagonal symbols (flux values, matter
/// occupations) plus a scalar.  Parts are kept in canonical sorted order with
/// unit powers.
struct FieldExpression {
  double constant = 0.0;
  std::vector<std::pair<OpFactor, double>> parts;
};

/// Electric field on the link leaving site (x, y) in direction `dir`,
/// expressed through loop registers, strings and charge corrections.  The
/// eliminated loop register enters as zero.
FieldExpression electric_field_expression(int x, int y, LinkAxis dir,
                                          const TorusModel& model);

/// Dynamical plus background charge at a site.  Fermionic matter carries the
/// usual alternating vacuum offset; bosonic matter counts occupation
/// directly.
FieldExpression charge_expression(int x, int y, const TorusModel& model);

/// Outgoing-minus-incoming field at a site minus its charge.  Identically
/// zero away from the origin; at the origin it equals minus the total charge,
/// which vanishes on the neutral sector where the loop description lives.
FieldExpression gauss_residual(int x, int y, const TorusModel& model);

/// Subtract the exact multiple of the total-charge form when the expression
/// is proportional to it; otherwise return the expression unchanged.
FieldExpression reduce_mod_total_charge(const FieldExpression& expr,
                                        const TorusModel& model);

/// Ladder-operator insertion of the hop leaving site (x, y) in direction
/// `dir`.  A product that covers every loop register collapses: shifting all
/// loops at once is the redundancy spent on fixing the eliminated register,
/// so its lowering operator equals the joint raising of all others.
std::vector<OpFactor> kinetic_replacement(int x, int y, LinkAxis dir,
                                          const TorusModel& model);

/// Hermitian-conjugate partner of a term in canonical factor order.
Term conjugate_term(const Term& term);

struct RegisterInfo {
  std::string kind;  ///< "rotator", "string_x", "string_y", "site"
  int x = -1;
  int y = -1;
  std::int64_t dimension = 0;
};

/// Register order used by the matrix build and by the serialized layout:
/// loop registers row by row (skipping the eliminated one), then the two
/// strings, then matter sites row by row.  The first register is the most
/// significant index digit.
std::vector<RegisterInfo> register_layout(const TorusModel& model);

struct TorusBuildOptions {
  std::int64_t dimension_cap = 200000;
  bool build_matrix = true;
};

struct TorusBuild {
  TermList terms;
  std::int64_t dim = 0;
  bool matrix_built = false;
  std::string resource_error;  ///< set when the cap blocked the matrix
  SparseCx hamiltonian;
  SparseCx magnetic_part;  ///< plaquette-coupling block, for observables
  SparseCx total_charge;   ///< dynamical + background, for symmetry checks
};

/// Full Hamiltonian of the periodic lattice as a term list, and as a sparse
/// matrix when the total dimension stays within the cap.  The term list is
/// closed under Hermitian conjugation and never references the eliminated
/// register.
TorusBuild build_torus_hamiltonian(const TorusModel& model,
                                   const TorusBuildOptions& options = {});

/// Serialized form of a generated term list together with the model and the
/// register layout.  The layout of the document is described in
/// docs/term_list_schema.json.
nlohmann::json term_list_to_json(const TorusModel& model,
                                 const TermList& terms);

/// Inverse of term_list_to_json for the term array (model echo ignored).
TermList term_list_from_json(const nlohmann::json& doc);

/// Structural validation of a serialized term list.  Returns human-readable
/// violations; an empty vector means the document conforms.
std::vector<std::string> validate_term_list_json(const nlohmann::json& doc);

}  // namespace lgt
