#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lgt/core.hpp"
#include "lgt/hamiltonian.hpp"
#include "lgt/solver.hpp"

namespace lgt {

/// <box> = -(g^2 a^2 / volume) <state| h_b |state>; volume = 4 for the
/// four-site periodic cell.
double plaquette_expectation(const VectorCx& state, const SparseCx& h_b,
                             double g2, double a = 1.0, int volume = 4);

/// Windowed discrete Fourier kernel on three registers: the tensor cube of
/// the (2l+1)x(2l+1) block of the (2L+1)-point transform. Dense; intended
/// for small l only.
DenseCx truncated_dft3(int l, int L);

/// Applies the three-register windowed transform without forming it.
VectorCx apply_truncated_dft3(const VectorCx& state, int l, int L);

/// Ground level of a Hermitian operator together with a degeneracy flag.
/// When the gap to the next level is below 1e-10 * ||H||, the returned basis
/// spans the whole near-degenerate level (up to four columns).
struct GroundSpace {
  double energy = 0.0;
  DenseCx basis;  // orthonormal columns
  bool degenerate = false;
};

GroundSpace ground_space(const SparseCx& h, const SolverOptions& opts = {});

/// Overlap of two (possibly multi-dimensional) ground levels: squared
/// smallest singular value of a^H b, i.e. the cosine^2 of the largest
/// principal angle. For single vectors this is |<a|b>|^2.
double subspace_overlap_sq(const DenseCx& a, const DenseCx& b);

/// |<state_b| W3 |state_e>|^2 with W3 the windowed transform above.
double fourier_fidelity(const VectorCx& state_e, const VectorCx& state_b,
                        int l, int L);

struct FourierFidelityPoint {
  int L = 0;
  double value = 0.0;
};

struct FourierFidelityScan {
  int l = 0;
  double g2 = 0.0;
  std::vector<FourierFidelityPoint> points;
  double best_value = 0.0;
  std::vector<int> best_L;  // every grid point within tie tolerance of the max
};

FourierFidelityScan maximize_fourier_fidelity(int l, double g2,
                                              const std::vector<int>& L_grid,
                                              const SolverOptions& opts = {},
                                              int workers = 1);

/// Overlap of ground states at neighbouring truncations on the shared
/// [-(l-1), l-1]^3 window; reported as a modulus so eigenvector phases
/// cannot flip the sign. `state_small` lives on (2l-1)^3, `state_large`
/// on (2l+1)^3.
double sequence_fidelity(const VectorCx& state_small,
                         const VectorCx& state_large, int l);

enum class LOptMethod { kink, global_min, frozen, grid_end };

struct LOptPoint {
  int l = 0;
  double g2 = 0.0;
  int L_opt = 0;
  LOptMethod method = LOptMethod::kink;
  bool frozen = false;    // optimum pinned to the grid start, L_opt == l+1
  bool warning = false;   // curve still falling at the grid end
  std::vector<int> grid;
  std::vector<double> infidelity;  // 1 - F_s along `grid`
};

std::vector<int> default_L_grid(int l, int span = 64);

/// Greedy scan of sequence infidelity over an ascending L grid starting at
/// l+1. Picks the first interior local minimum followed by a guarded rise
/// (the kink); falls back to the global interior minimum when the curve is
/// non-monotone without a guarded kink; a curve that only rises freezes the
/// optimum at the grid start.
LOptPoint find_L_opt(int l, double g2, const std::vector<int>& L_grid,
                     const SolverOptions& opts = {});

struct GmResult {
  int l = 0;
  double g2_m = 0.0;  // squared coupling at the fidelity peak
  double g_m = 0.0;
  std::vector<double> g2_grid;
  std::vector<double> best_fidelity;  // max over L, per coupling
  std::vector<int> best_L;            // one maximizing L per coupling
  bool ambiguous = false;             // flat curve or single-point grid
};

/// Location of the peak of the L-maximized transform fidelity over a
/// coupling grid. Below the peak the series-representation pipeline is the
/// better approximation, above it the unsquared one.
GmResult find_gm(int l, const std::vector<double>& g2_grid,
                 const std::vector<int>& L_grid,
                 const SolverOptions& opts = {}, int workers = 1);

enum class TruncationVariant {
  cyclic,        // full wrap-around ladder: exact transform
  band,          // ladder restricted to the inner l window
  wrap_removed,  // every band kept, wrap-around entries dropped
};

struct TruncationProfile {
  TruncationVariant variant = TruncationVariant::cyclic;
  double energy = 0.0;
  Eigen::VectorXd shell_population;  // index = max-norm shell radius 0..L
  Eigen::VectorXd cumulative;       // running sums of the above
};

/// Ground state of the rotator-space electric term built from the chosen
/// ladder variant, profiled over max-norm shells of the (2L+1)^3 space.
TruncationProfile truncation_profile(int l, int L, double g2,
                                     TruncationVariant variant,
                                     const SolverOptions& opts = {});

/// Population of the full wrap-around ground state outside the inner l
/// window (both polynomial parts included, coupling-dependent).
double window_leakage(int l, int L, double g2, const SolverOptions& opts = {});

struct ScanRecord {
  Representation rep = Representation::electric;
  int l = 0;
  int L = 0;  // 0 when unused
  double g2 = 0.0;
  std::int64_t dim = 0;
  double energy = 0.0;
  double box = 0.0;
  bool ok = false;
  std::string error;
};

/// Plaquette scan over the cartesian grid; deterministic record order
/// (g2-major, then l, then L). Solver failures are recorded per point and
/// the scan continues.
std::vector<ScanRecord> scan_plaquette(Representation rep,
                                       const std::vector<int>& l_grid,
                                       const std::vector<int>& L_grid,
                                       const std::vector<double>& g2_grid,
                                       const SolverOptions& opts = {},
                                       int workers = 1);

struct ResourceEntry {
  std::string strategy;  // "unsquared", "fixed-order", "scaled-order"
  int l = 0;
  int L = 0;
  std::int64_t states = 0;
  double box = 0.0;
  double rel_err = 0.0;
  bool reached = false;
};

struct ResourceComparison {
  double g2 = 0.0;
  int reference_l = 0;
  double reference_box = 0.0;
  double tolerance = 0.0;
  std::vector<ResourceEntry> curves;   // every probed point
  std::vector<ResourceEntry> minimal;  // cheapest point per strategy
};

/// States needed by each strategy to bring <box> within `rel_tol` of an
/// unsquared reference at truncation `ref_l`. Strategies: plain unsquared
/// truncation, series representation at a fixed order, and a series order
/// scaled with the inverse coupling (L = round(scale/g)).
ResourceComparison compare_resources(double g2, int ref_l, double rel_tol,
                                     int fixed_L, double scale,
                                     int max_l = 8,
                                     const SolverOptions& opts = {},
                                     int workers = 1);

/// Runs fn(0..n-1) on `workers` threads; callers write results to disjoint
/// slots so the outcome does not depend on scheduling.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace lgt
