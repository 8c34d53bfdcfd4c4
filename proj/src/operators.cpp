#include "lgt/operators.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lgt/fourier_coefficients.hpp"

namespace lgt {

SparseCx lowering_op(int l, bool cyclic) {
  const int d = 2 * l + 1;
  SparseCx p(d, d);
  std::vector<Triplet> t;
  t.reserve(d);
  for (int r = 1 - l; r <= l; ++r) t.emplace_back(r - 1 + l, r + l, 1.0);
  if (cyclic) t.emplace_back(2 * l, 0, 1.0);  // |l><-l|
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

SparseCx lowering_band_window(int l, int L) {
  if (l > L) throw std::invalid_argument("lowering_band_window: l <= L");
  const int d = 2 * L + 1;
  SparseCx p(d, d);
  std::vector<Triplet> t;
  for (int r = 1 - l; r <= l; ++r) t.emplace_back(r - 1 + L, r + L, 1.0);
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

SparseCx lowering_wrap_removed(int L) {
  SparseCx p = lowering_op(L, false);
  return p;
}

SparseCx flux_op(int l) {
  const int d = 2 * l + 1;
  SparseCx m(d, d);
  std::vector<Triplet> t;
  for (int r = -l; r <= l; ++r)
    if (r != 0) t.emplace_back(r + l, r + l, static_cast<double>(r));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseCx flux_squared_op(int l) {
  const int d = 2 * l + 1;
  SparseCx m(d, d);
  std::vector<Triplet> t;
  for (int r = -l; r <= l; ++r)
    if (r != 0) t.emplace_back(r + l, r + l, static_cast<double>(r) * r);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseCx clock_phase_op(int l, int L) {
  const int d = 2 * l + 1;
  const double theta = 2.0 * std::numbers::pi / (2 * L + 1);
  SparseCx m(d, d);
  std::vector<Triplet> t;
  for (int r = -l; r <= l; ++r)
    t.emplace_back(r + l, r + l, std::polar(1.0, -theta * r));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

namespace {

// S = sum_nu fs_nu (P^nu - P^dag^nu)/(2i),  C = sum_nu fc_nu (P^nu + P^dag^nu)/2.
// Powers of a strictly banded ladder vanish once nu exceeds the band width,
// which prunes most of the sum for l < L.
std::pair<SparseCx, SparseCx> trig_pair(const SparseCx& ladder, int L) {
  const TrigCoefficients fc = trig_series_coefficients(L);
  const auto dim = ladder.rows();
  SparseCx s(dim, dim);
  SparseCx c(dim, dim);
  SparseCx power = sparse_identity(dim);
  for (int nu = 1; nu <= 2 * L; ++nu) {
    power = SparseCx(power * ladder);
    power.prune(0.0, 0.0);
    if (power.nonZeros() == 0) break;
    SparseCx adj = SparseCx(power.adjoint());
    s += SparseCx((fc.sine[nu - 1] / cplx(0.0, 2.0)) * SparseCx(power - adj));
    c += SparseCx((fc.cosine[nu - 1] * 0.5) * SparseCx(power + adj));
  }
  s.prune([](auto, auto, const cplx& v) { return std::abs(v) > 0.0; });
  c.prune([](auto, auto, const cplx& v) { return std::abs(v) > 0.0; });
  return {s, c};
}

}  // namespace

SparseCx conjugate_flux_op(int l, int L, bool cyclic) {
  if (cyclic && l != L)
    throw std::invalid_argument("conjugate_flux_op: cyclic requires l == L");
  return trig_pair(lowering_op(l, cyclic), L).first;
}

SparseCx conjugate_flux_squared_op(int l, int L, bool cyclic) {
  if (cyclic && l != L)
    throw std::invalid_argument("conjugate_flux_squared_op: cyclic requires l == L");
  return trig_pair(lowering_op(l, cyclic), L).second;
}

SparseCx conjugate_flux_from_ladder(const SparseCx& ladder, int L) {
  return trig_pair(ladder, L).first;
}

SparseCx conjugate_flux_squared_from_ladder(const SparseCx& ladder, int L) {
  return trig_pair(ladder, L).second;
}

DenseCx dft_window(int l, int L) {
  const int d = 2 * l + 1;
  const int n = 2 * L + 1;
  const double theta = 2.0 * std::numbers::pi / n;
  DenseCx w(d, d);
  for (int j = -l; j <= l; ++j)
    for (int k = -l; k <= l; ++k)
      w(j + l, k + l) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                   theta * j * k);
  return w;
}

SparseCx embed_register(const SparseCx& op, int which, int count, int levels,
                        std::int64_t tail_dim) {
  if (which < 0 || which >= count)
    throw std::invalid_argument("embed_register: register index out of range");
  std::int64_t left = 1;
  for (int k = 0; k < which; ++k) left *= levels;
  std::int64_t right = tail_dim;
  for (int k = which + 1; k < count; ++k) right *= levels;
  SparseCx out = kron(sparse_identity(left), op);
  return kron(out, sparse_identity(right));
}

SparseCx kron(const SparseCx& a, const SparseCx& b) {
  SparseCx out = Eigen::kroneckerProduct(a, b).eval();
  out.makeCompressed();
  return out;
}

SparseCx sparse_identity(std::int64_t dim) {
  SparseCx id(dim, dim);
  id.setIdentity();
  return id;
}

}  // namespace lgt
