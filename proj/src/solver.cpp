#include "lgt/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>
#include <stdexcept>

namespace lgt {

namespace {

VectorCx seeded_start(std::int64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  VectorCx v(n);
  for (std::int64_t i = 0; i < n; ++i) v(i) = cplx(dist(rng), dist(rng));
  v.normalize();
  return v;
}

void orthogonalize(VectorCx& v, const std::vector<VectorCx>& basis) {
  // two passes of classical Gram-Schmidt are enough at working precision
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) v -= b.dot(v) * b;
}

EigenResult dense_lowest(const SparseCx& h, int k) {
  Eigen::SelfAdjointEigenSolver<DenseCx> es{DenseCx(h)};
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense eigensolver failed");
  EigenResult out;
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  out.converged = true;
  out.used_dense = true;
  return out;
}

}  // namespace

EigenResult lowest_eigenpairs(const SparseCx& h, int k,
                              const SolverOptions& opts) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix not square");
  const std::int64_t n = h.rows();
  if (k < 1 || k > n) throw std::invalid_argument("bad eigenpair count");
  if (!opts.force_iterative && n <= opts.dense_threshold)
    return dense_lowest(h, k);

  const int m = std::min<std::int64_t>(opts.krylov_dim, n);
  std::vector<VectorCx> locked;
  std::vector<double> locked_vals;
  EigenResult out;

  VectorCx start = seeded_start(n, opts.seed);
  std::uint64_t reseed = opts.seed;

  std::vector<VectorCx> v;  // Krylov basis of the current sweep
  Eigen::VectorXd alpha(m), beta(m);

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    if (static_cast<int>(locked.size()) >= k) break;

    orthogonalize(start, locked);
    if (start.norm() < 1e-12) start = seeded_start(n, ++reseed);
    start.normalize();

    v.clear();
    v.push_back(start);
    int built = 0;
    for (int j = 0; j < m; ++j) {
      VectorCx w = h * v[j];
      ++out.matvecs;
      alpha(j) = std::real(v[j].dot(w));
      w -= alpha(j) * v[j];
      if (j > 0) w -= beta(j - 1) * v[j - 1];
      orthogonalize(w, locked);
      orthogonalize(w, v);
      built = j + 1;
      const double nb = w.norm();
      if (j + 1 < m) {
        if (nb < 1e-13) {  // invariant subspace exhausted; pad randomly
          VectorCx fresh = seeded_start(n, ++reseed);
          orthogonalize(fresh, locked);
          orthogonalize(fresh, v);
          if (fresh.norm() < 1e-12) break;
          fresh.normalize();
          beta(j) = 0.0;
          v.push_back(fresh);
        } else {
          beta(j) = nb;
          v.push_back(w / nb);
        }
      }
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
    for (int j = 0; j < built; ++j) {
      tri(j, j) = alpha(j);
      if (j + 1 < built) tri(j, j + 1) = tri(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const double theta = es.eigenvalues()(0);
    VectorCx x = VectorCx::Zero(n);
    for (int j = 0; j < built; ++j) x += es.eigenvectors()(j, 0) * v[j];
    orthogonalize(x, locked);
    x.normalize();

    VectorCx r = h * x - theta * x;
    ++out.matvecs;
    if (r.norm() <= opts.tol * std::max(1.0, std::abs(theta))) {
      locked.push_back(x);
      locked_vals.push_back(theta);
      // warm-start the next eigenpair with the following Ritz vector
      if (built > 1) {
        VectorCx next = VectorCx::Zero(n);
        for (int j = 0; j < built; ++j) next += es.eigenvectors()(j, 1) * v[j];
        start = next;
      } else {
        start = seeded_start(n, ++reseed);
      }
    } else {
      start = x;
    }
  }

  out.converged = static_cast<int>(locked.size()) >= k;
  const int got = static_cast<int>(locked.size());
  if (got == 0) throw std::runtime_error("eigensolver failed to converge");
  std::vector<int> order(got);
  for (int i = 0; i < got; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return locked_vals[a] < locked_vals[b]; });
  const int keep = std::min(k, got);
  out.values.resize(keep);
  out.vectors.resize(n, keep);
  for (int i = 0; i < keep; ++i) {
    out.values(i) = locked_vals[order[i]];
    out.vectors.col(i) = locked[order[i]];
  }
  return out;
}

EigenResult ground_state(const SparseCx& h, const SolverOptions& opts) {
  return lowest_eigenpairs(h, 1, opts);
}

}  // namespace lgt
