#include "lgt/torus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "lgt/matter.hpp"
#include "lgt/operators.hpp"

namespace lgt {

namespace {

void check_model(const TorusModel& m) {
  if (m.nx < 2 || m.ny < 2)
    throw std::invalid_argument("torus: lattice must be at least 2x2");
  if (m.l < 1) throw std::invalid_argument("torus: need l >= 1");
  if (m.g2 <= 0.0) throw std::invalid_argument("torus: need g2 > 0");
  if (m.a <= 0.0) throw std::invalid_argument("torus: need a > 0");
  if (m.statistics == MatterStatistics::bosonic && m.boson_max_occupation < 1)
    throw std::invalid_argument("torus: need boson_max_occupation >= 1");
  if (!m.static_charges.empty() &&
      static_cast<int>(m.static_charges.size()) != m.nx * m.ny)
    throw std::invalid_argument(
        "torus: static_charges must cover every site or be empty");
}

int site_index(const TorusModel& m, int x, int y) { return y * m.nx + x; }

bool is_eliminated(const TorusModel& m, int x, int y) {
  return x == 0 && y == m.ny - 1;
}

int static_charge(const TorusModel& m, int x, int y) {
  return m.static_charges.empty() ? 0 : m.static_charges[site_index(m, x, y)];
}

bool same_symbol(const OpFactor& a, const OpFactor& b) {
  return a.op == b.op && a.x == b.x && a.y == b.y;
}

bool symbol_less(const OpFactor& a, const OpFactor& b) {
  if (a.op != b.op) return a.op < b.op;
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

void add_symbol(FieldExpression& e, OpFactor f, double coeff) {
  f.power = 1;
  for (auto& part : e.parts) {
    if (same_symbol(part.first, f)) {
      part.second += coeff;
      return;
    }
  }
  e.parts.emplace_back(std::move(f), coeff);
}

void add_scaled(FieldExpression& acc, const FieldExpression& e, double scale) {
  acc.constant += scale * e.constant;
  for (const auto& part : e.parts) add_symbol(acc, part.first, scale * part.second);
}

void tidy(FieldExpression& e) {
  std::erase_if(e.parts,
                [](const auto& p) { return std::abs(p.second) < 1e-12; });
  std::sort(e.parts.begin(), e.parts.end(), [](const auto& a, const auto& b) {
    return symbol_less(a.first, b.first);
  });
  if (std::abs(e.constant) < 1e-12) e.constant = 0.0;
}

bool is_zero(const FieldExpression& e) {
  return e.parts.empty() && e.constant == 0.0;
}

/// Canonical factor layout: creation operators first, then the commuting
/// register factors sorted with like symbols merged, annihilators last.
/// Matter ladder factors keep their relative order (they need not commute).
void normalize_term(Term& t) {
  std::vector<OpFactor> creators, annihilators, rest;
  for (auto& f : t.factors) {
    if (f.op == "psi_dag")
      creators.push_back(f);
    else if (f.op == "psi")
      annihilators.push_back(f);
    else
      rest.push_back(f);
  }
  std::sort(rest.begin(), rest.end(), symbol_less);
  std::vector<OpFactor> merged;
  for (auto& f : rest) {
    if (!merged.empty() && same_symbol(merged.back(), f))
      merged.back().power += f.power;
    else
      merged.push_back(std::move(f));
  }
  std::erase_if(merged, [](const OpFactor& f) { return f.power == 0; });
  t.factors.clear();
  t.factors.insert(t.factors.end(), creators.begin(), creators.end());
  t.factors.insert(t.factors.end(), merged.begin(), merged.end());
  t.factors.insert(t.factors.end(), annihilators.begin(), annihilators.end());
}

std::string term_key(const Term& t) {
  std::string key;
  for (const auto& f : t.factors) {
    key += f.op;
    key += '(' + std::to_string(f.x) + ',' + std::to_string(f.y) + ")^" +
           std::to_string(f.power) + ';';
  }
  return key;
}

/// Collector that merges like factor products as terms accumulate.
struct TermAccumulator {
  std::vector<Term> out;
  std::map<std::string, std::size_t> index;

  void add(cplx coeff, std::vector<OpFactor> factors) {
    Term t{coeff, std::move(factors)};
    normalize_term(t);
    const std::string key = term_key(t);
    if (auto it = index.find(key); it != index.end()) {
      out[it->second].coefficient += coeff;
    } else {
      index.emplace(key, out.size());
      out.push_back(std::move(t));
    }
  }

  std::vector<Term> take() {
    std::erase_if(out,
                  [](const Term& t) { return std::abs(t.coefficient) < 1e-14; });
    return std::move(out);
  }
};

std::vector<Term> electric_terms(const TorusModel& m) {
  TermAccumulator acc;
  const double pref = 0.5 * m.g2;
  for (int y = 0; y < m.ny; ++y) {
    for (int x = 0; x < m.nx; ++x) {
      for (LinkAxis dir : {LinkAxis::x, LinkAxis::y}) {
        const FieldExpression e = electric_field_expression(x, y, dir, m);
        for (const auto& [fi, ai] : e.parts) {
          for (const auto& [fj, aj] : e.parts)
            acc.add(pref * ai * aj, {fi, fj});
          acc.add(2.0 * pref * e.constant * ai, {fi});
        }
        if (e.constant != 0.0)
          acc.add(pref * e.constant * e.constant, {});
      }
    }
  }
  return acc.take();
}

std::vector<Term> magnetic_terms(const TorusModel& m) {
  const cplx coeff(-1.0 / (2.0 * m.g2 * m.a * m.a), 0.0);
  std::vector<Term> out;
  Term joint{coeff, {}};
  for (int y = 0; y < m.ny; ++y)
    for (int x = 0; x < m.nx; ++x)
      if (!is_eliminated(m, x, y)) joint.factors.push_back({"P", x, y, 1});
  normalize_term(joint);
  out.push_back(joint);
  out.push_back(conjugate_term(joint));
  for (int y = 0; y < m.ny; ++y) {
    for (int x = 0; x < m.nx; ++x) {
      if (is_eliminated(m, x, y)) continue;
      Term single{coeff, {OpFactor{"P", x, y, 1}}};
      out.push_back(single);
      out.push_back(conjugate_term(single));
    }
  }
  return out;
}

std::vector<Term> kinetic_terms(const TorusModel& m) {
  std::vector<Term> out;
  if (m.kappa == 0.0) return out;
  for (int y = 0; y < m.ny; ++y) {
    for (int x = 0; x < m.nx; ++x) {
      for (LinkAxis dir : {LinkAxis::x, LinkAxis::y}) {
        const int tx = dir == LinkAxis::x ? (x + 1) % m.nx : x;
        const int ty = dir == LinkAxis::y ? (y + 1) % m.ny : y;
        Term t{cplx(m.kappa, 0.0), {}};
        t.factors.push_back({"psi_dag", x, y, 1});
        for (auto& f : kinetic_replacement(x, y, dir, m))
          t.factors.push_back(std::move(f));
        t.factors.push_back({"psi", tx, ty, 1});
        normalize_term(t);
        out.push_back(t);
        out.push_back(conjugate_term(t));
      }
    }
  }
  return out;
}

std::vector<Term> mass_terms(const TorusModel& m) {
  std::vector<Term> out;
  if (m.mass == 0.0) return out;
  for (int y = 0; y < m.ny; ++y) {
    for (int x = 0; x < m.nx; ++x) {
      double sign = 1.0;
      if (m.statistics == MatterStatistics::fermionic && (x + y) % 2 != 0)
        sign = -1.0;
      out.push_back(Term{cplx(m.mass * sign, 0.0), {OpFactor{"n", x, y, 1}}});
    }
  }
  return out;
}

/// Matter-register ladder and occupation operators over the full matter
/// subspace, chain-ordered row by row.
struct MatterSpace {
  std::vector<SparseCx> lower;
  std::vector<SparseCx> number;
  std::int64_t dim = 0;
};

MatterSpace matter_space(const TorusModel& m) {
  const int sites = m.nx * m.ny;
  MatterSpace sp;
  if (m.statistics == MatterStatistics::fermionic) {
    FermionOps f = jw_chain(sites);
    sp.lower = std::move(f.lower);
    sp.number = std::move(f.number);
    sp.dim = f.dim;
    return sp;
  }
  const int d = m.boson_max_occupation + 1;
  SparseCx b(d, d), occ(d, d);
  {
    std::vector<Triplet> tb, tn;
    for (int k = 1; k < d; ++k) tb.emplace_back(k - 1, k, std::sqrt(double(k)));
    for (int k = 0; k < d; ++k) tn.emplace_back(k, k, double(k));
    b.setFromTriplets(tb.begin(), tb.end());
    occ.setFromTriplets(tn.begin(), tn.end());
  }
  sp.dim = 1;
  for (int s = 0; s < sites; ++s) sp.dim *= d;
  for (int s = 0; s < sites; ++s) {
    std::int64_t before = 1, after = 1;
    for (int k = 0; k < s; ++k) before *= d;
    for (int k = s + 1; k < sites; ++k) after *= d;
    sp.lower.push_back(
        kron(sparse_identity(before), kron(b, sparse_identity(after))));
    sp.number.push_back(
        kron(sparse_identity(before), kron(occ, sparse_identity(after))));
  }
  return sp;
}

SparseCx matrix_power(const SparseCx& base, int p) {
  SparseCx acc = base;
  for (int k = 1; k < p; ++k) acc = SparseCx(acc * base);
  return acc;
}

/// Everything needed to turn factors into matrices on the product space.
struct MatrixContext {
  const TorusModel& m;
  int levels;
  int n_gauge;
  std::int64_t gauge_dim;
  std::vector<int> rot_register;  // site index -> gauge register, -1 if gone
  int string_x_register;
  int string_y_register;
  MatterSpace matter;
  std::int64_t dim;
  SparseCx ladder;  // band lowering on one flux register
  SparseCx flux;

  explicit MatrixContext(const TorusModel& model)
      : m(model),
        levels(2 * model.l + 1),
        n_gauge(model.nx * model.ny + 1),
        rot_register(model.nx * model.ny, -1),
        matter(matter_space(model)),
        ladder(lowering_op(model.l, false)),
        flux(flux_op(model.l)) {
    int reg = 0;
    for (int y = 0; y < m.ny; ++y)
      for (int x = 0; x < m.nx; ++x)
        if (!is_eliminated(m, x, y)) rot_register[site_index(m, x, y)] = reg++;
    string_x_register = reg++;
    string_y_register = reg++;
    if (reg != n_gauge) throw std::logic_error("torus: register count mismatch");
    gauge_dim = 1;
    for (int k = 0; k < n_gauge; ++k) gauge_dim *= levels;
    dim = gauge_dim * matter.dim;
  }

  SparseCx gauge_embed(const SparseCx& op, int reg) const {
    return embed_register(op, reg, n_gauge, levels, matter.dim);
  }

  SparseCx matter_embed(const SparseCx& op) const {
    return kron(sparse_identity(gauge_dim), op);
  }

  SparseCx factor_matrix(const OpFactor& f) const {
    if (f.op == "psi" || f.op == "psi_dag") {
      const SparseCx& low = matter.lower[site_index(m, f.x, f.y)];
      if (f.op == "psi") return matter_embed(low);
      return matter_embed(SparseCx(low.adjoint()));
    }
    if (f.op == "n") {
      if (f.power < 1) throw std::invalid_argument("torus: bad power on n");
      return matter_embed(
          matrix_power(matter.number[site_index(m, f.x, f.y)], f.power));
    }
    if (f.op == "R" || f.op == "Rx" || f.op == "Ry") {
      if (f.power < 1) throw std::invalid_argument("torus: bad power on flux");
      return gauge_embed(matrix_power(flux, f.power), flux_register(f));
    }
    if (f.op == "P" || f.op == "Px" || f.op == "Py") {
      if (f.power == 0) throw std::invalid_argument("torus: zero ladder power");
      SparseCx base = f.power > 0 ? ladder : SparseCx(ladder.adjoint());
      return gauge_embed(matrix_power(base, std::abs(f.power)),
                         flux_register(f));
    }
    throw std::invalid_argument("torus: unknown operator factor '" + f.op + "'");
  }

  int flux_register(const OpFactor& f) const {
    if (f.op == "Rx" || f.op == "Px") return string_x_register;
    if (f.op == "Ry" || f.op == "Py") return string_y_register;
    const int reg = rot_register[site_index(m, f.x, f.y)];
    if (reg < 0)
      throw std::invalid_argument("torus: term references the fixed register");
    return reg;
  }

  SparseCx term_matrix(const Term& t) const {
    SparseCx acc;
    bool first = true;
    for (const auto& f : t.factors) {
      SparseCx fm = factor_matrix(f);
      acc = first ? fm : SparseCx(acc * fm);
      first = false;
    }
    if (first) acc = sparse_identity(dim);
    return SparseCx(t.coefficient * acc);
  }
};

}  // namespace

FieldExpression charge_expression(int x, int y, const TorusModel& m) {
  check_model(m);
  FieldExpression e;
  add_symbol(e, OpFactor{"n", x, y, 1}, 1.0);
  if (m.statistics == MatterStatistics::fermionic && (x + y) % 2 != 0)
    e.constant -= 1.0;  // odd sublattice counts holes around the filled vacuum
  e.constant += static_charge(m, x, y);
  tidy(e);
  return e;
}

FieldExpression electric_field_expression(int x, int y, LinkAxis dir,
                                          const TorusModel& m) {
  check_model(m);
  FieldExpression e;
  if (dir == LinkAxis::x) {
    if (y == 0) add_symbol(e, OpFactor{"Rx", -1, -1, 1}, 1.0);
    if (!is_eliminated(m, x, y)) add_symbol(e, OpFactor{"R", x, y, 1}, 1.0);
    const int ym = (y + m.ny - 1) % m.ny;
    if (!is_eliminated(m, x, ym)) add_symbol(e, OpFactor{"R", x, ym, 1}, -1.0);
    if (y == 0) {
      // every charge that sits strictly to the right sends its horizontal
      // return path through this bottom-row link
      for (int rx = x + 1; rx < m.nx; ++rx)
        for (int ry = 0; ry < m.ny; ++ry)
          add_scaled(e, charge_expression(rx, ry, m), -1.0);
    }
  } else {
    if (x == 0) add_symbol(e, OpFactor{"Ry", -1, -1, 1}, 1.0);
    const int xm = (x + m.nx - 1) % m.nx;
    if (!is_eliminated(m, xm, y)) add_symbol(e, OpFactor{"R", xm, y, 1}, 1.0);
    if (!is_eliminated(m, x, y)) add_symbol(e, OpFactor{"R", x, y, 1}, -1.0);
    // vertical legs of the strings of all charges higher up this column
    for (int ry = y + 1; ry < m.ny; ++ry)
      add_scaled(e, charge_expression(x, ry, m), -1.0);
  }
  tidy(e);
  return e;
}

FieldExpression gauss_residual(int x, int y, const TorusModel& m) {
  check_model(m);
  FieldExpression r;
  add_scaled(r, electric_field_expression(x, y, LinkAxis::x, m), 1.0);
  add_scaled(r, electric_field_expression(x, y, LinkAxis::y, m), 1.0);
  add_scaled(r, electric_field_expression((x + m.nx - 1) % m.nx, y, LinkAxis::x, m),
             -1.0);
  add_scaled(r, electric_field_expression(x, (y + m.ny - 1) % m.ny, LinkAxis::y, m),
             -1.0);
  add_scaled(r, charge_expression(x, y, m), -1.0);
  tidy(r);
  return r;
}

FieldExpression reduce_mod_total_charge(const FieldExpression& expr,
                                        const TorusModel& m) {
  check_model(m);
  FieldExpression total;
  for (int y = 0; y < m.ny; ++y)
    for (int x = 0; x < m.nx; ++x)
      add_scaled(total, charge_expression(x, y, m), 1.0);
  tidy(total);

  double lambda = 0.0;
  if (!total.parts.empty()) {
    const OpFactor& probe = total.parts.front().first;
    for (const auto& part : expr.parts)
      if (same_symbol(part.first, probe))
        lambda = part.second / total.parts.front().second;
  } else if (total.constant != 0.0) {
    lambda = expr.constant / total.constant;
  } else {
    return expr;
  }

  FieldExpression diff = expr;
  add_scaled(diff, total, -lambda);
  tidy(diff);
  if (is_zero(diff)) return diff;
  return expr;
}

std::vector<OpFactor> kinetic_replacement(int x, int y, LinkAxis dir,
                                          const TorusModel& m) {
  check_model(m);
  std::vector<OpFactor> out;
  if (dir == LinkAxis::x) {
    if (x == m.nx - 1) out.push_back(OpFactor{"Px", -1, -1, -1});
    for (int ry = 0; ry < y; ++ry) out.push_back(OpFactor{"P", x, ry, 1});
    return out;
  }
  if (y < m.ny - 1) return out;  // only the wrapping row carries an insertion
  std::map<std::pair<int, int>, int> powers;  // keyed (row, column)
  for (int rx = x; rx < m.nx; ++rx)
    for (int ry = 0; ry < m.ny; ++ry) powers[{ry, rx}] += 1;
  const auto fixed = std::make_pair(m.ny - 1, 0);
  if (auto it = powers.find(fixed); it != powers.end()) {
    // lowering the fixed register = raising every other one jointly
    const int k = it->second;
    powers.erase(it);
    for (int ry = 0; ry < m.ny; ++ry)
      for (int rx = 0; rx < m.nx; ++rx)
        if (!(rx == 0 && ry == m.ny - 1)) powers[{ry, rx}] -= k;
  }
  out.push_back(OpFactor{"Py", -1, -1, -1});
  for (const auto& [key, p] : powers)
    if (p != 0) out.push_back(OpFactor{"P", key.second, key.first, p});
  return out;
}

Term conjugate_term(const Term& t) {
  Term c;
  c.coefficient = std::conj(t.coefficient);
  for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
    OpFactor f = *it;
    if (f.op == "psi")
      f.op = "psi_dag";
    else if (f.op == "psi_dag")
      f.op = "psi";
    else if (f.op == "P" || f.op == "Px" || f.op == "Py")
      f.power = -f.power;
    c.factors.push_back(std::move(f));
  }
  normalize_term(c);
  return c;
}

std::vector<RegisterInfo> register_layout(const TorusModel& m) {
  check_model(m);
  std::vector<RegisterInfo> regs;
  const std::int64_t levels = 2 * m.l + 1;
  for (int y = 0; y < m.ny; ++y)
    for (int x = 0; x < m.nx; ++x)
      if (!is_eliminated(m, x, y)) regs.push_back({"rotator", x, y, levels});
  regs.push_back({"string_x", -1, -1, levels});
  regs.push_back({"string_y", -1, -1, levels});
  const std::int64_t site_dim = m.statistics == MatterStatistics::fermionic
                                    ? 2
                                    : m.boson_max_occupation + 1;
  for (int y = 0; y < m.ny; ++y)
    for (int x = 0; x < m.nx; ++x) regs.push_back({"site", x, y, site_dim});
  return regs;
}

TorusBuild build_torus_hamiltonian(const TorusModel& m,
                                   const TorusBuildOptions& options) {
  check_model(m);
  TorusBuild out;

  std::vector<Term> he = electric_terms(m);
  std::vector<Term> hb = magnetic_terms(m);
  std::vector<Term> hk = kinetic_terms(m);
  std::vector<Term> hm = mass_terms(m);
  out.terms.terms.reserve(he.size() + hb.size() + hk.size() + hm.size());
  auto append = [&](std::vector<Term>& block) {
    for (auto& t : block) out.terms.terms.push_back(std::move(t));
  };
  append(he);
  append(hb);
  append(hk);
  append(hm);

  long double fdim = 1.0L;
  std::int64_t dim = 1;
  bool saturated = false;
  for (const auto& reg : register_layout(m)) {
    fdim *= reg.dimension;
    if (!saturated &&
        dim > std::numeric_limits<std::int64_t>::max() / reg.dimension)
      saturated = true;
    if (!saturated) dim *= reg.dimension;
  }
  out.dim = saturated ? 0 : dim;

  if (!options.build_matrix) return out;
  if (saturated || fdim > static_cast<long double>(options.dimension_cap)) {
    out.resource_error =
        "torus: product dimension " + std::to_string(static_cast<double>(fdim)) +
        " exceeds the matrix cap " + std::to_string(options.dimension_cap) +
        "; term list produced without a matrix";
    return out;
  }

  MatrixContext ctx(m);
  SparseCx h(ctx.dim, ctx.dim), hbmat(ctx.dim, ctx.dim);
  std::size_t pos = 0;
  const std::size_t he_count = out.terms.terms.size() -
                               (hb.size() + hk.size() + hm.size());
  for (const Term& t : out.terms.terms) {
    SparseCx tm = ctx.term_matrix(t);
    h += tm;
    if (pos >= he_count && pos < he_count + hb.size()) hbmat += tm;
    ++pos;
  }
  out.hamiltonian = std::move(h);
  out.magnetic_part = std::move(hbmat);

  SparseCx q(ctx.dim, ctx.dim);
  double shift = 0.0;
  for (int y = 0; y < m.ny; ++y) {
    for (int x = 0; x < m.nx; ++x) {
      const FieldExpression e = charge_expression(x, y, m);
      for (const auto& [f, coeff] : e.parts)
        q += SparseCx(coeff * ctx.factor_matrix(f));
      shift += e.constant;
    }
  }
  if (shift != 0.0) q += SparseCx(cplx(shift, 0.0) * sparse_identity(ctx.dim));
  out.total_charge = std::move(q);
  out.matrix_built = true;
  return out;
}

nlohmann::json term_list_to_json(const TorusModel& m, const TermList& terms) {
  check_model(m);
  nlohmann::json doc;
  doc["format"] = {{"name", "lgt-term-list"}, {"version", 1}};
  doc["lattice"] = {{"nx", m.nx}, {"ny", m.ny}};
  doc["statistics"] =
      m.statistics == MatterStatistics::fermionic ? "fermionic" : "bosonic";
  doc["truncation"] = {{"l", m.l}};
  if (m.statistics == MatterStatistics::bosonic)
    doc["truncation"]["max_occupation"] = m.boson_max_occupation;
  doc["couplings"] = {
      {"g2", m.g2}, {"a", m.a}, {"mass", m.mass}, {"kappa", m.kappa}};
  nlohmann::json charges = nlohmann::json::array();
  for (int y = 0; y < m.ny; ++y)
    for (int x = 0; x < m.nx; ++x) charges.push_back(static_charge(m, x, y));
  doc["static_charges"] = charges;
  nlohmann::json regs = nlohmann::json::array();
  for (const auto& reg : register_layout(m)) {
    nlohmann::json r = {{"kind", reg.kind}, {"dimension", reg.dimension}};
    if (reg.x >= 0) {
      r["x"] = reg.x;
      r["y"] = reg.y;
    }
    regs.push_back(std::move(r));
  }
  doc["registers"] = std::move(regs);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms.terms) {
    nlohmann::json jt;
    jt["coefficient"] = {t.coefficient.real(), t.coefficient.imag()};
    nlohmann::json jf = nlohmann::json::array();
    for (const auto& f : t.factors) {
      nlohmann::json one = {{"op", f.op}, {"power", f.power}};
      if (f.x >= 0) {
        one["x"] = f.x;
        one["y"] = f.y;
      }
      jf.push_back(std::move(one));
    }
    jt["factors"] = std::move(jf);
    arr.push_back(std::move(jt));
  }
  doc["terms"] = std::move(arr);
  return doc;
}

TermList term_list_from_json(const nlohmann::json& doc) {
  TermList list;
  for (const auto& jt : doc.at("terms")) {
    Term t;
    const auto& c = jt.at("coefficient");
    t.coefficient = cplx(c.at(0).get<double>(), c.at(1).get<double>());
    for (const auto& jf : jt.at("factors")) {
      OpFactor f;
      f.op = jf.at("op").get<std::string>();
      f.power = jf.value("power", 1);
      f.x = jf.value("x", -1);
      f.y = jf.value("y", -1);
      t.factors.push_back(std::move(f));
    }
    list.terms.push_back(std::move(t));
  }
  return list;
}

std::vector<std::string> validate_term_list_json(const nlohmann::json& doc) {
  std::vector<std::string> bad;
  auto complain = [&](const std::string& msg) { bad.push_back(msg); };

  if (!doc.is_object()) return {"document is not an object"};
  if (!doc.contains("format") || !doc["format"].is_object() ||
      doc["format"].value("name", "") != "lgt-term-list")
    complain("missing or wrong format.name");
  if (doc.contains("format") && doc["format"].value("version", 0) < 1)
    complain("format.version must be a positive integer");

  int nx = 0, ny = 0;
  if (!doc.contains("lattice") || !doc["lattice"].is_object()) {
    complain("missing lattice");
  } else {
    nx = doc["lattice"].value("nx", 0);
    ny = doc["lattice"].value("ny", 0);
    if (nx < 2 || ny < 2) complain("lattice.nx and lattice.ny must be >= 2");
  }

  const std::string stats = doc.value("statistics", "");
  if (stats != "fermionic" && stats != "bosonic")
    complain("statistics must be 'fermionic' or 'bosonic'");

  if (!doc.contains("truncation") || doc["truncation"].value("l", 0) < 1)
    complain("truncation.l must be >= 1");

  if (!doc.contains("couplings") || !doc["couplings"].is_object()) {
    complain("missing couplings");
  } else {
    if (doc["couplings"].value("g2", 0.0) <= 0.0)
      complain("couplings.g2 must be positive");
    if (doc["couplings"].value("a", 0.0) <= 0.0)
      complain("couplings.a must be positive");
    for (const char* key : {"mass", "kappa"})
      if (!doc["couplings"].contains(key) ||
          !doc["couplings"][key].is_number())
        complain(std::string("couplings.") + key + " must be a number");
  }

  if (doc.contains("static_charges")) {
    if (!doc["static_charges"].is_array() ||
        (nx > 0 && static_cast<int>(doc["static_charges"].size()) != nx * ny))
      complain("static_charges must list one integer per site");
  }

  if (!doc.contains("registers") || !doc["registers"].is_array()) {
    complain("missing registers");
  } else if (nx > 0) {
    const int expect = nx * ny - 1 + 2 + nx * ny;
    if (static_cast<int>(doc["registers"].size()) != expect)
      complain("register count does not match the lattice");
    for (const auto& r : doc["registers"]) {
      const std::string kind = r.value("kind", "");
      if (kind != "rotator" && kind != "string_x" && kind != "string_y" &&
          kind != "site")
        complain("unknown register kind '" + kind + "'");
      if (r.value("dimension", 0) < 1)
        complain("register dimension must be >= 1");
    }
  }

  const bool site_op = true, global_op = false;
  const std::map<std::string, bool> vocab = {
      {"R", site_op},  {"Rx", global_op}, {"Ry", global_op},
      {"P", site_op},  {"Px", global_op}, {"Py", global_op},
      {"n", site_op},  {"psi", site_op},  {"psi_dag", site_op}};

  if (!doc.contains("terms") || !doc["terms"].is_array()) {
    complain("missing terms");
    return bad;
  }

  std::map<std::string, cplx> totals;
  std::vector<std::pair<Term, std::string>> parsed;
  std::size_t idx = 0;
  for (const auto& jt : doc["terms"]) {
    const std::string where = "terms[" + std::to_string(idx++) + "]";
    if (!jt.contains("coefficient") || !jt["coefficient"].is_array() ||
        jt["coefficient"].size() != 2 || !jt["coefficient"][0].is_number() ||
        !jt["coefficient"][1].is_number()) {
      complain(where + ": coefficient must be [re, im]");
      continue;
    }
    if (!jt.contains("factors") || !jt["factors"].is_array()) {
      complain(where + ": missing factors array");
      continue;
    }
    Term t;
    t.coefficient = cplx(jt["coefficient"][0].get<double>(),
                         jt["coefficient"][1].get<double>());
    bool ok = true;
    for (const auto& jf : jt["factors"]) {
      OpFactor f;
      f.op = jf.value("op", "");
      f.power = jf.value("power", 1);
      f.x = jf.value("x", -1);
      f.y = jf.value("y", -1);
      auto it = vocab.find(f.op);
      if (it == vocab.end()) {
        complain(where + ": unknown op '" + f.op + "'");
        ok = false;
        break;
      }
      if (f.power == 0) complain(where + ": zero power");
      if (it->second) {
        if (nx > 0 && (f.x < 0 || f.x >= nx || f.y < 0 || f.y >= ny)) {
          complain(where + ": site coordinates out of range");
          ok = false;
          break;
        }
        if ((f.op == "R" || f.op == "P") && nx > 0 && f.x == 0 && f.y == ny - 1)
          complain(where + ": references the fixed register (0, ny-1)");
      } else if (jf.contains("x") || jf.contains("y")) {
        complain(where + ": string operator must not carry coordinates");
      }
      t.factors.push_back(std::move(f));
    }
    if (!ok) continue;
    // double conjugation lands every term in the canonical layout
    Term canon = conjugate_term(conjugate_term(t));
    const std::string key = term_key(canon);
    totals[key] += canon.coefficient;
    parsed.emplace_back(std::move(canon), key);
  }

  for (const auto& [t, key] : parsed) {
    const Term partner = conjugate_term(t);
    const std::string pkey = term_key(partner);
    auto self = totals.find(key);
    auto mate = totals.find(pkey);
    const cplx have = mate == totals.end() ? cplx(0, 0) : mate->second;
    const cplx want = std::conj(self->second);
    if (std::abs(have - want) > 1e-12 * std::max(1.0, std::abs(want))) {
      complain("term '" + key + "' lacks its Hermitian-conjugate partner");
      break;
    }
  }
  return bad;
}

}  // namespace lgt
