#pragma once

#include "lgt/core.hpp"

namespace lgt {

struct SolverOptions {
  int krylov_dim = 96;          ///< Lanczos basis size per restart sweep
  int max_restarts = 500;
  double tol = 1e-11;           ///< residual tolerance, relative to |theta|
  std::uint64_t seed = 0x1c0ffee5eedULL;
  std::int64_t dense_threshold = 1200;  ///< use dense diagonalization below this
  bool force_iterative = false;         ///< bypass the dense fallback (tests)
};

struct EigenResult {
  Eigen::VectorXd values;  ///< ascending
  DenseCx vectors;         ///< columns match values
  int matvecs = 0;
  bool converged = false;
  bool used_dense = false;
};

/// Lowest k eigenpairs of a Hermitian sparse matrix.  Deterministic for a
/// fixed seed.  Small problems are handed to a dense solver, large ones to a
/// restarted Lanczos iteration with full reorthogonalization and locking.
EigenResult lowest_eigenpairs(const SparseCx& h, int k,
                              const SolverOptions& opts = {});

/// Convenience wrapper for the ground state.
EigenResult ground_state(const SparseCx& h, const SolverOptions& opts = {});

}  // namespace lgt
