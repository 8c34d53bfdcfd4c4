#include "lgt/link_formulation.hpp"

#include <array>
#include <stdexcept>
#include <vector>

#include "lgt/operators.hpp"

namespace lgt {

namespace {

constexpr int kLinks = 5;

// Linear forms of the eight link energies in the retained register values
// (r0..r4), after the divergence constraints fix the other three fields.
// Rows: the five kept links, then the three substituted ones.
constexpr std::array<std::array<int, kLinks>, 8> kEnergyForms{{
    {1, 0, 0, 0, 0},
    {0, 1, 0, 0, 0},
    {0, 0, 1, 0, 0},
    {0, 0, 0, 1, 0},
    {0, 0, 0, 0, 1},
    {0, 1, -1, 0, 1},   // (0,1) y-link
    {0, 0, 1, 1, -1},   // (1,1) y-link
    {1, 0, 1, 0, -1},   // (1,0) x-link
}};

}  // namespace

HamiltonianParts build_link_formulation(const PlaquetteModel& model) {
  if (model.l < 1) throw std::invalid_argument("flux truncation must be >= 1");
  if (model.g2 <= 0.0) throw std::invalid_argument("coupling must be positive");
  if (model.a <= 0.0) throw std::invalid_argument("spacing must be positive");
  for (int q : model.static_charges)
    if (q != 0)
      throw std::invalid_argument(
          "the five-link build supports only vanishing static charges");

  RegisterBasis basis{model.l, kLinks};
  const std::int64_t dim = basis.dim();

  HamiltonianParts parts;
  parts.dim = dim;
  parts.dropped_constant = 0.0;

  // Electric part: diagonal sum of squared link energies.
  std::vector<Triplet> diag;
  diag.reserve(static_cast<std::size_t>(dim));
  std::array<int, kLinks> r{};
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    basis.decode(idx, r);
    double energy = 0.0;
    for (const auto& form : kEnergyForms) {
      int field = 0;
      for (int k = 0; k < kLinks; ++k) field += form[k] * r[k];
      energy += static_cast<double>(field) * field;
    }
    diag.emplace_back(static_cast<int>(idx), static_cast<int>(idx),
                      cplx(0.5 * model.g2 * energy, 0.0));
  }
  parts.electric.resize(dim, dim);
  parts.electric.setFromTriplets(diag.begin(), diag.end());

  // Magnetic part: the four elementary loops, with ladder factors only on the
  // retained registers.  Substituted links contribute identities, so one loop
  // collapses to a single ladder and two others to short products.
  const int levels = basis.levels();
  const SparseCx ladder = lowering_op(model.l, false);
  auto link = [&](int which, bool dagger) {
    SparseCx op = dagger ? SparseCx(ladder.adjoint()) : ladder;
    return embed_register(op, which, kLinks, levels);
  };

  SparseCx loops =
      SparseCx(link(0, false) * link(3, false) * link(2, true) * link(1, true));
  loops += SparseCx(link(1, false) * link(4, true) * link(3, true));
  loops += link(4, false);
  loops += SparseCx(link(2, false) * link(0, true));
  const double pref = 1.0 / (2.0 * model.g2 * model.a * model.a);
  parts.magnetic =
      SparseCx(cplx(pref, 0.0) * SparseCx(loops + SparseCx(loops.adjoint())));

  return parts;
}

SparseCx zero_winding_selector(int l) {
  if (l < 1) throw std::invalid_argument("flux truncation must be >= 1");
  RegisterBasis basis{l, kLinks};
  const std::int64_t dim = basis.dim();
  std::array<int, kLinks> r{};
  std::vector<Triplet> cols;
  int picked = 0;
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    basis.decode(idx, r);
    if (r[0] + r[2] == 0 && r[1] + r[3] == 0) {
      cols.emplace_back(static_cast<int>(idx), picked, cplx(1.0, 0.0));
      ++picked;
    }
  }
  SparseCx sel(dim, picked);
  sel.setFromTriplets(cols.begin(), cols.end());
  return sel;
}

}  // namespace lgt
