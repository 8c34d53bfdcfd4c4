#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cassert>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace lgt {

using cplx = std::complex<double>;
using SparseCx = Eigen::SparseMatrix<cplx>;
using DenseCx = Eigen::MatrixXcd;
using VectorCx = Eigen::VectorXcd;
using Triplet = Eigen::Triplet<cplx>;

/// Product basis of `count` flux registers, each with levels in [-l, l].
/// The first register is the most significant digit of the mixed-radix index.
struct RegisterBasis {
  int l = 0;
  int count = 0;

  int levels() const { return 2 * l + 1; }

  std::int64_t dim() const {
    std::int64_t d = 1;
    for (int k = 0; k < count; ++k) d *= levels();
    return d;
  }

  std::int64_t index(std::span<const int> r) const {
    assert(static_cast<int>(r.size()) == count);
    std::int64_t idx = 0;
    for (int k = 0; k < count; ++k) {
      assert(r[k] >= -l && r[k] <= l);
      idx = idx * levels() + (r[k] + l);
    }
    return idx;
  }

  void decode(std::int64_t idx, std::span<int> r) const {
    assert(static_cast<int>(r.size()) == count);
    for (int k = count - 1; k >= 0; --k) {
      r[k] = static_cast<int>(idx % levels()) - l;
      idx /= levels();
    }
  }

  /// Largest |r_k| over the registers of basis state `idx` (max-norm shell).
  int shell(std::int64_t idx) const {
    int s = 0;
    for (int k = count - 1; k >= 0; --k) {
      int rk = static_cast<int>(idx % levels()) - l;
      s = std::max(s, std::abs(rk));
      idx /= levels();
    }
    return s;
  }
};

inline bool approx_hermitian(const SparseCx& m, double tol = 1e-12) {
  SparseCx d = SparseCx(m - SparseCx(m.adjoint()));
  double worst = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseCx::InnerIterator it(d, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst <= tol;
}

inline double max_abs(const SparseCx& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCx::InnerIterator it(m, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace lgt
