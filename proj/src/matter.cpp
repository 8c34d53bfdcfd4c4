#include "lgt/matter.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lgt/operators.hpp"

namespace lgt {

namespace {

SparseCx two_by_two(cplx a00, cplx a01, cplx a10, cplx a11) {
  SparseCx m(2, 2);
  std::vector<Triplet> t;
  if (a00 != 0.0) t.emplace_back(0, 0, a00);
  if (a01 != 0.0) t.emplace_back(0, 1, a01);
  if (a10 != 0.0) t.emplace_back(1, 0, a10);
  if (a11 != 0.0) t.emplace_back(1, 1, a11);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

FermionOps jw_chain(int sites) {
  if (sites < 1) throw std::invalid_argument("jw_chain: sites >= 1");
  SparseCx sz = two_by_two(1.0, 0.0, 0.0, -1.0);
  SparseCx sm = two_by_two(0.0, 1.0, 0.0, 0.0);  // |0><1|
  SparseCx num = two_by_two(0.0, 0.0, 0.0, 1.0);
  SparseCx id2 = sparse_identity(2);

  FermionOps ops;
  ops.dim = std::int64_t{1} << sites;
  for (int k = 0; k < sites; ++k) {
    SparseCx low(1, 1), n(1, 1);
    low.insert(0, 0) = 1.0;
    n.insert(0, 0) = 1.0;
    for (int j = 0; j < sites; ++j) {
      low = kron(low, j < k ? sz : (j == k ? sm : id2));
      n = kron(n, j == k ? num : id2);
    }
    ops.lower.push_back(low);
    ops.number.push_back(n);
  }
  return ops;
}

MatterSystem build_matter_plaquette(const MatterModel& model) {
  if (model.l < 1)
    throw std::invalid_argument("build_matter_plaquette: l >= 1 required");
  if (model.g2 <= 0.0)
    throw std::invalid_argument("build_matter_plaquette: g2 must be positive");
  if (model.rep == Representation::magnetic && model.L < model.l)
    throw std::invalid_argument("build_matter_plaquette: needs l <= L");

  const int d = 2 * model.l + 1;
  const std::int64_t nf = 16;
  const std::int64_t dim =
      static_cast<std::int64_t>(d) * d * d * d * d * nf;
  const double g2 = model.g2;
  const double a2 = model.a * model.a;

  FermionOps f = jw_chain(4);
  // chain order follows the snake over the cell:
  // 0 = (0,0), 1 = (0,1), 2 = (1,1), 3 = (1,0)
  SparseCx id16 = sparse_identity(nf);
  std::vector<SparseCx> q = {
      f.number[0],
      SparseCx(f.number[1] - id16),
      f.number[2],
      SparseCx(f.number[3] - id16),
  };  // site charges: (0,0), (0,1), (1,1), (1,0)

  auto embed_reg = [&](const SparseCx& op, int which) {
    return embed_register(op, which, 5, d, nf);
  };
  auto embed_fermi = [&](const SparseCx& op) {
    std::int64_t regs = dim / nf;
    return kron(sparse_identity(regs), op);
  };

  std::vector<SparseCx> y(5), x(5);
  std::vector<SparseCx> ins(8);
  SparseCx hb(dim, dim);
  double dropped = 0.0;

  if (model.rep == Representation::electric) {
    SparseCx r = flux_op(model.l);
    SparseCx r2 = flux_squared_op(model.l);
    SparseCx p = lowering_op(model.l, model.cyclic);
    for (int k = 0; k < 5; ++k) {
      y[k] = embed_reg(r, k);
      x[k] = embed_reg(r2, k);
    }
    SparseCx p1 = embed_reg(p, 0), p2 = embed_reg(p, 1), p3 = embed_reg(p, 2);
    SparseCx px = embed_reg(p, 3), py = embed_reg(p, 4);
    SparseCx one = sparse_identity(dim);
    ins = {one,
           px,
           p1,
           SparseCx(SparseCx(p2.adjoint()) * px),
           one,
           py,
           one,
           SparseCx(SparseCx(p2.adjoint()) * SparseCx(p3.adjoint()) * py)};
    SparseCx loop =
        SparseCx(p1 + p2 + p3 + SparseCx(SparseCx(p1 * p2 * p3).adjoint()));
    hb = SparseCx((-1.0 / (2.0 * g2 * a2)) *
                  SparseCx(loop + SparseCx(loop.adjoint())));
  } else {
    const bool full = model.l == model.L;
    SparseCx s = conjugate_flux_op(model.l, model.L, full);
    SparseCx c = conjugate_flux_squared_op(model.l, model.L, full);
    SparseCx clock = clock_phase_op(model.l, model.L);
    for (int k = 0; k < 5; ++k) {
      y[k] = embed_reg(s, k);
      x[k] = embed_reg(c, k);
    }
    SparseCx t1 = embed_reg(clock, 0), t2 = embed_reg(clock, 1),
             t3 = embed_reg(clock, 2);
    SparseCx tx = embed_reg(clock, 3), ty = embed_reg(clock, 4);
    SparseCx one = sparse_identity(dim);
    ins = {one,
           tx,
           t1,
           SparseCx(SparseCx(t2.adjoint()) * tx),
           one,
           ty,
           one,
           SparseCx(SparseCx(t2.adjoint()) * SparseCx(t3.adjoint()) * ty)};
    // the loop term is diagonal in this basis: cosines of the three loop
    // registers plus their sum
    const double theta = 2.0 * std::numbers::pi / (2 * model.L + 1);
    std::vector<Triplet> t;
    t.reserve(dim);
    RegisterBasis regs(model.l, 5);
    const std::int64_t reg_dim = dim / nf;
    for (std::int64_t i = 0; i < reg_dim; ++i) {
      int rv[5];
      regs.decode(i, rv);
      double val = std::cos(theta * rv[0]) + std::cos(theta * rv[1]) +
                   std::cos(theta * rv[2]) +
                   std::cos(theta * (rv[0] + rv[1] + rv[2]));
      val *= -1.0 / (g2 * a2);
      for (std::int64_t ff = 0; ff < nf; ++ff)
        t.emplace_back(i * nf + ff, i * nf + ff, val);
    }
    hb.setFromTriplets(t.begin(), t.end());
    dropped = (8.0 / 3.0) * g2 * model.l * (model.l + 1);
  }

  SparseCx q00 = embed_fermi(q[0]), q01 = embed_fermi(q[1]),
           q11 = embed_fermi(q[2]), q10 = embed_fermi(q[3]);

  SparseCx quad = SparseCx(x[0] + x[1] + x[2]);
  quad = SparseCx(quad - SparseCx(y[1] * SparseCx(y[0] + y[2])));
  SparseCx he = SparseCx(2.0 * quad);
  he = SparseCx(he + x[3] + x[4]);
  he = SparseCx(he + SparseCx(SparseCx(y[0] + y[1] - y[2]) * y[3]));
  he = SparseCx(he - SparseCx(SparseCx(y[0] - y[1] - y[2]) * y[4]));
  he = SparseCx(he - SparseCx(q10 * SparseCx(y[0] + y[3])));
  he = SparseCx(he - SparseCx(q01 * SparseCx(y[1] - y[0] + y[4])));
  he = SparseCx(he - SparseCx(q11 * SparseCx(2.0 * y[0] - y[1] + y[3])));
  SparseCx qq = SparseCx(SparseCx(q10 * q10) + SparseCx(q01 * q01));
  qq = SparseCx(qq + SparseCx(2.0 * SparseCx(q11 * SparseCx(q10 + q11))));
  he = SparseCx(he + SparseCx(0.5 * qq));
  he = SparseCx(g2 * he);
  // the factors of every product act on distinct registers, so averaging
  // with the adjoint only removes floating-point asymmetry
  he = SparseCx(0.5 * SparseCx(he + SparseCx(he.adjoint())));

  SparseCx hm = embed_fermi(SparseCx(
      model.mass * SparseCx(f.number[0] - f.number[1] + f.number[2] -
                            f.number[3])));

  SparseCx hk(dim, dim);
  const int hop_site[8][2] = {{0, 3}, {0, 3}, {1, 2}, {1, 2},
                              {0, 1}, {0, 1}, {3, 2}, {3, 2}};
  for (int h = 0; h < 8; ++h) {
    SparseCx bilinear = SparseCx(SparseCx(f.lower[hop_site[h][0]].adjoint()) *
                                 f.lower[hop_site[h][1]]);
    SparseCx term = SparseCx(ins[h] * embed_fermi(bilinear));
    hk = SparseCx(hk + SparseCx(model.kappa *
                                SparseCx(term + SparseCx(term.adjoint()))));
  }

  MatterSystem sys;
  sys.magnetic_part = hb;
  sys.hamiltonian = SparseCx(he + hb + hm + hk);
  sys.total_charge = SparseCx(q00 + q01 + q11 + q10);
  sys.dropped_constant = dropped;
  sys.dim = dim;
  return sys;
}

}  // namespace lgt
