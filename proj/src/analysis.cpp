#include "lgt/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "lgt/operators.hpp"

namespace lgt {

namespace {

double infinity_norm(const SparseCx& m) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m.rows());
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCx::InnerIterator it(m, k); it; ++it)
      row_sums(it.row()) += std::abs(it.value());
  return row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

// one register of a three-register state transformed by a dense kernel
VectorCx apply_mode(const VectorCx& v, const DenseCx& w, int d, int mode) {
  std::int64_t stride = 1;
  for (int k = 2; k > mode; --k) stride *= d;
  const std::int64_t block = stride * d;
  VectorCx out(v.size());
  for (std::int64_t base = 0; base < v.size(); base += block)
    for (std::int64_t off = 0; off < stride; ++off)
      for (int a = 0; a < d; ++a) {
        cplx acc = 0.0;
        for (int j = 0; j < d; ++j) acc += w(a, j) * v(base + j * stride + off);
        out(base + a * stride + off) = acc;
      }
  return out;
}

// window overlap matrix between ground levels at truncations l-1 and l
DenseCx window_overlap_matrix(const DenseCx& small_basis,
                              const DenseCx& large_basis, int l) {
  const int ds = 2 * l - 1;
  const int dl = 2 * l + 1;
  DenseCx m(small_basis.cols(), large_basis.cols());
  for (int a = 0; a < small_basis.cols(); ++a)
    for (int b = 0; b < large_basis.cols(); ++b) {
      cplx acc = 0.0;
      for (int j1 = 0; j1 < ds; ++j1)
        for (int j2 = 0; j2 < ds; ++j2)
          for (int j3 = 0; j3 < ds; ++j3) {
            std::int64_t is = (static_cast<std::int64_t>(j1) * ds + j2) * ds + j3;
            std::int64_t il =
                (static_cast<std::int64_t>(j1 + 1) * dl + (j2 + 1)) * dl +
                (j3 + 1);
            acc += std::conj(small_basis(is, a)) * large_basis(il, b);
          }
      m(a, b) = acc;
    }
  return m;
}

double smallest_singular_value(const DenseCx& m) {
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<DenseCx> svd(m);
  return svd.singularValues().minCoeff();
}

SparseCx profile_hamiltonian(int l, int L, double g2,
                             TruncationVariant variant) {
  SparseCx ladder;
  switch (variant) {
    case TruncationVariant::cyclic: ladder = lowering_op(L, true); break;
    case TruncationVariant::band: ladder = lowering_band_window(l, L); break;
    case TruncationVariant::wrap_removed:
      ladder = lowering_wrap_removed(L);
      break;
  }
  SparseCx s1 = conjugate_flux_from_ladder(ladder, L);
  SparseCx c1 = conjugate_flux_squared_from_ladder(ladder, L);
  const int d = 2 * L + 1;
  std::vector<SparseCx> s(3), c(3);
  for (int k = 0; k < 3; ++k) {
    s[k] = embed_register(s1, k, 3, d);
    c[k] = embed_register(c1, k, 3, d);
  }
  SparseCx h = SparseCx(2.0 * (c[0] + c[1] + c[2]));
  h = SparseCx(h - SparseCx(s[1] * s[0]) - SparseCx(s[1] * s[2]));
  h = SparseCx(h - SparseCx(s[0] * s[1]) - SparseCx(s[2] * s[1]));
  // the linear operators commute across registers; averaging the two
  // orderings keeps the assembled matrix exactly hermitian in floating point
  return SparseCx(0.5 * g2 * SparseCx(h + SparseCx(h.adjoint())));
}

}  // namespace

double plaquette_expectation(const VectorCx& state, const SparseCx& h_b,
                             double g2, double a, int volume) {
  if (state.size() != h_b.rows())
    throw std::invalid_argument("plaquette_expectation: size mismatch");
  cplx e = state.dot(h_b * state);
  return -(g2 * a * a / volume) * e.real();
}

DenseCx truncated_dft3(int l, int L) {
  DenseCx w = dft_window(l, L);
  const int d = 2 * l + 1;
  DenseCx w2(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) w2.block(i * d, j * d, d, d) = w(i, j) * w;
  DenseCx w3(static_cast<std::int64_t>(d) * d * d,
             static_cast<std::int64_t>(d) * d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      w3.block(static_cast<std::int64_t>(i) * d * d,
               static_cast<std::int64_t>(j) * d * d, d * d, d * d) =
          w(i, j) * w2;
  return w3;
}

VectorCx apply_truncated_dft3(const VectorCx& state, int l, int L) {
  const int d = 2 * l + 1;
  if (state.size() != static_cast<std::int64_t>(d) * d * d)
    throw std::invalid_argument("apply_truncated_dft3: size mismatch");
  DenseCx w = dft_window(l, L);
  VectorCx out = apply_mode(state, w, d, 0);
  out = apply_mode(out, w, d, 1);
  out = apply_mode(out, w, d, 2);
  return out;
}

GroundSpace ground_space(const SparseCx& h, const SolverOptions& opts) {
  const std::int64_t dim = h.rows();
  const double scale = std::max(1.0, infinity_norm(h));
  const int k_max = static_cast<int>(std::min<std::int64_t>(4, dim));
  int k = std::min(2, k_max);
  for (;;) {
    auto res = lowest_eigenpairs(h, k, opts);
    int m = 1;
    while (m < k && res.values(m) - res.values(0) < 1e-10 * scale) ++m;
    if (m < k || k == k_max) {
      GroundSpace gs;
      gs.energy = res.values(0);
      gs.basis = res.vectors.leftCols(m);
      gs.degenerate = m > 1;
      return gs;
    }
    ++k;
  }
}

double subspace_overlap_sq(const DenseCx& a, const DenseCx& b) {
  double s = smallest_singular_value(DenseCx(a.adjoint() * b));
  return s * s;
}

double fourier_fidelity(const VectorCx& state_e, const VectorCx& state_b,
                        int l, int L) {
  VectorCx mapped = apply_truncated_dft3(state_e, l, L);
  cplx ov = state_b.dot(mapped);
  return std::norm(ov);
}

FourierFidelityScan maximize_fourier_fidelity(int l, double g2,
                                              const std::vector<int>& L_grid,
                                              const SolverOptions& opts,
                                              int workers) {
  if (L_grid.empty())
    throw std::invalid_argument("maximize_fourier_fidelity: empty grid");
  PlaquetteModel e;
  e.rep = Representation::electric;
  e.l = l;
  e.g2 = g2;
  GroundSpace ge = ground_space(build_plaquette(e).hamiltonian(), opts);

  FourierFidelityScan scan;
  scan.l = l;
  scan.g2 = g2;
  scan.points.resize(L_grid.size());
  parallel_for(static_cast<int>(L_grid.size()), workers, [&](int i) {
    PlaquetteModel b;
    b.rep = Representation::magnetic;
    b.l = l;
    b.L = L_grid[i];
    b.g2 = g2;
    GroundSpace gb = ground_space(build_plaquette(b).hamiltonian(), opts);
    DenseCx mapped(ge.basis.rows(), ge.basis.cols());
    for (int c = 0; c < ge.basis.cols(); ++c)
      mapped.col(c) = apply_truncated_dft3(ge.basis.col(c), l, L_grid[i]);
    scan.points[i] = {L_grid[i], subspace_overlap_sq(gb.basis, mapped)};
  });
  scan.best_value = 0.0;
  for (const auto& p : scan.points)
    scan.best_value = std::max(scan.best_value, p.value);
  for (const auto& p : scan.points)
    if (p.value >= scan.best_value - 1e-12) scan.best_L.push_back(p.L);
  return scan;
}

double sequence_fidelity(const VectorCx& state_small,
                         const VectorCx& state_large, int l) {
  const int ds = 2 * l - 1;
  const int dl = 2 * l + 1;
  if (l < 1 || state_small.size() != static_cast<std::int64_t>(ds) * ds * ds ||
      state_large.size() != static_cast<std::int64_t>(dl) * dl * dl)
    throw std::invalid_argument("sequence_fidelity: size mismatch");
  DenseCx m = window_overlap_matrix(state_small, state_large, l);
  return std::abs(m(0, 0));
}

std::vector<int> default_L_grid(int l, int span) {
  std::vector<int> grid;
  for (int L = l + 1; L <= l + span; ++L) grid.push_back(L);
  return grid;
}

LOptPoint find_L_opt(int l, double g2, const std::vector<int>& L_grid,
                     const SolverOptions& opts) {
  if (l < 1) throw std::invalid_argument("find_L_opt: needs l >= 1");
  if (L_grid.empty() || L_grid.front() != l + 1)
    throw std::invalid_argument("find_L_opt: grid must start at l+1");
  for (std::size_t i = 1; i < L_grid.size(); ++i)
    if (L_grid[i] <= L_grid[i - 1])
      throw std::invalid_argument("find_L_opt: grid must ascend");

  LOptPoint point;
  point.l = l;
  point.g2 = g2;
  point.grid = L_grid;
  point.infidelity.resize(L_grid.size());
  for (std::size_t i = 0; i < L_grid.size(); ++i) {
    PlaquetteModel large;
    large.rep = Representation::magnetic;
    large.l = l;
    large.L = L_grid[i];
    large.g2 = g2;
    GroundSpace gl = ground_space(build_plaquette(large).hamiltonian(), opts);
    DenseCx small_basis;
    if (l == 1) {
      // the next-smaller window holds a single state
      small_basis = DenseCx::Ones(1, 1);
    } else {
      PlaquetteModel small = large;
      small.l = l - 1;
      small_basis =
          ground_space(build_plaquette(small).hamiltonian(), opts).basis;
    }
    double f =
        smallest_singular_value(window_overlap_matrix(small_basis, gl.basis, l));
    point.infidelity[i] = 1.0 - f;
  }

  // Curves start at their minimum and rise when the optimum sits at the
  // grid start; otherwise they climb over a hump and fall into an interior
  // minimum (the kink) before rising again. Scan for the first interior
  // minimum whose following rise clears a relative guard, so that slow
  // asymptotic tails do not register as kinks.
  const auto& f = point.infidelity;
  const std::size_t n = f.size();
  const double atol = 1e-11;
  const double guard = 0.1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (f[i] <= f[i - 1] &&
        f[i + 1] - f[i] > std::max(atol, guard * f[i])) {
      point.L_opt = L_grid[i];
      point.method = LOptMethod::kink;
      return point;
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (f[i] < f[best]) best = i;
  if (best == 0) {
    point.L_opt = L_grid.front();
    point.method = LOptMethod::frozen;
    point.frozen = true;
  } else if (best == n - 1) {
    point.L_opt = L_grid.back();
    point.method = LOptMethod::grid_end;
    point.warning = true;  // still falling at the end of the grid
  } else {
    point.L_opt = L_grid[best];
    point.method = LOptMethod::global_min;
  }
  return point;
}

GmResult find_gm(int l, const std::vector<double>& g2_grid,
                 const std::vector<int>& L_grid, const SolverOptions& opts,
                 int workers) {
  if (g2_grid.empty()) throw std::invalid_argument("find_gm: empty grid");
  GmResult res;
  res.l = l;
  res.g2_grid = g2_grid;
  res.best_fidelity.resize(g2_grid.size());
  res.best_L.resize(g2_grid.size());
  for (std::size_t i = 0; i < g2_grid.size(); ++i) {
    auto scan = maximize_fourier_fidelity(l, g2_grid[i], L_grid, opts, workers);
    res.best_fidelity[i] = scan.best_value;
    res.best_L[i] = scan.best_L.front();
  }
  std::size_t peak = 0;
  for (std::size_t i = 1; i < g2_grid.size(); ++i)
    if (res.best_fidelity[i] > res.best_fidelity[peak]) peak = i;
  res.g2_m = g2_grid[peak];
  res.g_m = std::sqrt(res.g2_m);
  double lo = *std::min_element(res.best_fidelity.begin(),
                                res.best_fidelity.end());
  double hi = *std::max_element(res.best_fidelity.begin(),
                                res.best_fidelity.end());
  res.ambiguous = g2_grid.size() < 2 || hi - lo < 1e-9;
  return res;
}

TruncationProfile truncation_profile(int l, int L, double g2,
                                     TruncationVariant variant,
                                     const SolverOptions& opts) {
  if (l < 1 || L < l) throw std::invalid_argument("truncation_profile: l <= L");
  SparseCx h = profile_hamiltonian(l, L, g2, variant);
  GroundSpace gs = ground_space(h, opts);
  RegisterBasis basis(L, 3);
  TruncationProfile profile;
  profile.variant = variant;
  profile.energy = gs.energy;
  profile.shell_population = Eigen::VectorXd::Zero(L + 1);
  for (int c = 0; c < gs.basis.cols(); ++c)
    for (std::int64_t i = 0; i < basis.dim(); ++i)
      profile.shell_population(basis.shell(i)) +=
          std::norm(gs.basis(i, c)) / gs.basis.cols();
  profile.cumulative = profile.shell_population;
  for (int s = 1; s <= L; ++s)
    profile.cumulative(s) += profile.cumulative(s - 1);
  return profile;
}

double window_leakage(int l, int L, double g2, const SolverOptions& opts) {
  if (l >= L) throw std::invalid_argument("window_leakage: needs l < L");
  PlaquetteModel model;
  model.rep = Representation::magnetic;
  model.l = L;  // untruncated wrap-around build
  model.L = L;
  model.g2 = g2;
  auto parts = build_plaquette(model);
  auto res = ground_state(parts.hamiltonian(), opts);
  RegisterBasis basis(L, 3);
  double leaked = 0.0;
  for (std::int64_t i = 0; i < basis.dim(); ++i)
    if (basis.shell(i) > l) leaked += std::norm(res.vectors(i, 0));
  return leaked;
}

std::vector<ScanRecord> scan_plaquette(Representation rep,
                                       const std::vector<int>& l_grid,
                                       const std::vector<int>& L_grid,
                                       const std::vector<double>& g2_grid,
                                       const SolverOptions& opts,
                                       int workers) {
  std::vector<int> L_axis =
      rep == Representation::electric ? std::vector<int>{0} : L_grid;
  if (L_axis.empty()) L_axis.push_back(0);
  std::vector<ScanRecord> records;
  for (double g2 : g2_grid)
    for (int l : l_grid)
      for (int L : L_axis) {
        ScanRecord r;
        r.rep = rep;
        r.l = l;
        r.L = L;
        r.g2 = g2;
        records.push_back(r);
      }
  parallel_for(static_cast<int>(records.size()), workers, [&](int i) {
    ScanRecord& r = records[i];
    try {
      PlaquetteModel model;
      model.rep = r.rep;
      model.l = r.l;
      model.L = r.L;
      model.g2 = r.g2;
      auto parts = build_plaquette(model);
      auto res = ground_state(parts.hamiltonian(), opts);
      r.dim = parts.dim;
      r.energy = res.values(0);
      r.box = plaquette_expectation(res.vectors.col(0), parts.magnetic, r.g2);
      r.ok = true;
    } catch (const std::exception& ex) {
      r.ok = false;
      r.error = ex.what();
    }
  });
  return records;
}

ResourceComparison compare_resources(double g2, int ref_l, double rel_tol,
                                     int fixed_L, double scale, int max_l,
                                     const SolverOptions& opts, int workers) {
  ResourceComparison cmp;
  cmp.g2 = g2;
  cmp.reference_l = ref_l;
  cmp.tolerance = rel_tol;

  PlaquetteModel ref;
  ref.rep = Representation::electric;
  ref.l = ref_l;
  ref.g2 = g2;
  auto ref_parts = build_plaquette(ref);
  auto ref_state = ground_state(ref_parts.hamiltonian(), opts);
  cmp.reference_box =
      plaquette_expectation(ref_state.vectors.col(0), ref_parts.magnetic, g2);

  struct Probe {
    std::string strategy;
    int l;
    int L;
  };
  std::vector<Probe> probes;
  const int scaled_L_base =
      static_cast<int>(std::lround(scale / std::sqrt(g2)));
  for (int l = 2; l <= max_l; ++l) {
    probes.push_back({"unsquared", l, 0});
    if (l <= fixed_L) probes.push_back({"fixed-order", l, fixed_L});
    probes.push_back({"scaled-order", l, std::max(l + 1, scaled_L_base)});
  }

  cmp.curves.resize(probes.size());
  parallel_for(static_cast<int>(probes.size()), workers, [&](int i) {
    const Probe& p = probes[i];
    ResourceEntry entry;
    entry.strategy = p.strategy;
    entry.l = p.l;
    entry.L = p.L;
    entry.states = RegisterBasis(p.l, 3).dim();
    PlaquetteModel model;
    model.rep = p.L == 0 ? Representation::electric : Representation::magnetic;
    model.l = p.l;
    model.L = p.L;
    model.g2 = g2;
    auto parts = build_plaquette(model);
    auto res = ground_state(parts.hamiltonian(), opts);
    entry.box = plaquette_expectation(res.vectors.col(0), parts.magnetic, g2);
    entry.rel_err =
        std::abs(entry.box - cmp.reference_box) / std::abs(cmp.reference_box);
    entry.reached = entry.rel_err <= rel_tol;
    cmp.curves[i] = entry;
  });

  for (const char* name : {"unsquared", "fixed-order", "scaled-order"}) {
    const ResourceEntry* best = nullptr;
    for (const auto& e : cmp.curves)
      if (e.strategy == name && e.reached && (!best || e.states < best->states))
        best = &e;
    if (best) cmp.minimal.push_back(*best);
  }
  return cmp;
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace lgt
