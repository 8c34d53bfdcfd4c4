#include "lgt/hamiltonian.hpp"

#include <stdexcept>

#include "lgt/operators.hpp"

namespace lgt {

RegisterSuite make_register_suite(const PlaquetteModel& model) {
  RegisterSuite suite;
  if (model.rep == Representation::electric) {
    suite.linear = flux_op(model.l);
    suite.squared = flux_squared_op(model.l);
    suite.ladder = lowering_op(model.l, model.cyclic);
    suite.dropped_per_squared = 0.0;
  } else {
    const bool cyclic = (model.l == model.L);
    suite.linear = conjugate_flux_op(model.l, model.L, cyclic);
    suite.squared = conjugate_flux_squared_op(model.l, model.L, cyclic);
    suite.ladder = clock_phase_op(model.l, model.L);
    suite.dropped_per_squared = model.L * (model.L + 1) / 3.0;
  }
  return suite;
}

HamiltonianParts build_plaquette(const PlaquetteModel& model) {
  if (model.l < 1) throw std::invalid_argument("build_plaquette: l >= 1");
  if (model.rep == Representation::magnetic && model.L < model.l)
    throw std::invalid_argument("build_plaquette: requires L >= l");
  if (!model.include_strings &&
      (model.static_charges[0] || model.static_charges[1] ||
       model.static_charges[2]))
    throw std::invalid_argument(
        "build_plaquette: static charges require the string registers");

  const RegisterSuite suite = make_register_suite(model);
  const int count = model.include_strings ? 5 : 3;
  const int d = 2 * model.l + 1;
  std::int64_t dim = 1;
  for (int i = 0; i < count; ++i) dim *= d;

  auto reg = [&](const SparseCx& op, int which) {
    return embed_register(op, which, count, d);
  };

  std::vector<SparseCx> y, x, t;
  for (int i = 0; i < count; ++i) {
    y.push_back(reg(suite.linear, i));
    x.push_back(reg(suite.squared, i));
  }
  for (int i = 0; i < 3; ++i) t.push_back(reg(suite.ladder, i));

  HamiltonianParts parts;
  parts.dim = dim;

  // flux energy: loop terms, then winding and charge couplings
  SparseCx he =
      SparseCx(2.0 * SparseCx(x[0] + x[1] + x[2]) -
               2.0 * SparseCx(y[1] * SparseCx(y[0] + y[2])));
  double dropped = 2.0 * 3.0 * suite.dropped_per_squared;
  if (model.include_strings) {
    const auto& q = model.static_charges;  // q(1,0), q(0,1), q(1,1)
    he += SparseCx(x[3] + x[4]);
    he += SparseCx(SparseCx(y[0] + y[1] - y[2]) * y[3]);
    he -= SparseCx(SparseCx(y[0] - y[1] - y[2]) * y[4]);
    dropped += 2.0 * suite.dropped_per_squared;
    SparseCx charge_linear =
        SparseCx(static_cast<double>(q[0]) * SparseCx(y[0] + y[3]) +
                 static_cast<double>(q[1]) * SparseCx(y[1] - y[0] + y[4]) +
                 static_cast<double>(q[2]) * SparseCx(2.0 * y[0] - y[1] + y[3]));
    he -= charge_linear;
    const double qq =
        0.5 * (q[0] * q[0] + q[1] * q[1] + 2.0 * q[2] * (q[0] + q[2]));
    he += SparseCx(qq * sparse_identity(dim));
  }
  parts.electric = SparseCx(model.g2 * he);
  parts.dropped_constant = model.g2 * dropped;

  // plaquette sum: three loops plus the closure of the fourth
  SparseCx sum = SparseCx(t[0] + t[1] + t[2]);
  sum += SparseCx(SparseCx(SparseCx(t[0] * t[1]) * t[2]).adjoint());
  SparseCx hb = SparseCx(sum + SparseCx(sum.adjoint()));
  parts.magnetic =
      SparseCx(cplx(-1.0 / (2.0 * model.g2 * model.a * model.a), 0.0) * hb);
  parts.magnetic.prune([](auto, auto, const cplx& v) { return v != cplx(0.0); });
  parts.electric.prune([](auto, auto, const cplx& v) { return v != cplx(0.0); });
  return parts;
}

}  // namespace lgt
