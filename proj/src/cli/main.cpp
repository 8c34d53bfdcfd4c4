#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lgt/analysis.hpp"
#include "lgt/hamiltonian.hpp"
#include "lgt/link_formulation.hpp"
#include "lgt/matrix_market.hpp"
#include "lgt/matter.hpp"
#include "lgt/run_config.hpp"
#include "lgt/solver.hpp"
#include "lgt/torus.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct CsvWriter {
  std::ofstream out;
  CsvWriter(const fs::path& path, const std::string& schema,
            const std::vector<std::string>& columns) {
    out.open(path);
    if (!out)
      throw std::runtime_error("cannot open " + path.string() +
                               " for writing");
    out << "# schema: " << schema << "\n";
    row(columns);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(cells[i]);
    }
    out << '\n';
  }
};

const json* find_node(const json& doc, const std::string& dotted) {
  const json* node = &doc;
  std::size_t start = 0;
  while (true) {
    std::size_t stop = dotted.find('.', start);
    std::string key = dotted.substr(start, stop - start);
    if (!node->is_object() || !node->contains(key)) return nullptr;
    node = &(*node)[key];
    if (stop == std::string::npos) return node;
    start = stop + 1;
  }
}

template <typename T>
T fetch(const json& doc, const std::string& key, const T& fallback) {
  const json* n = find_node(doc, key);
  if (!n) return fallback;
  try {
    return n->get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config: field '" + key +
                                "' has the wrong type");
  }
}

std::vector<int> int_list(const json& doc, const std::string& key,
                          std::vector<int> fallback) {
  const json* n = find_node(doc, key);
  if (!n) return fallback;
  try {
    if (n->is_number()) return {n->get<int>()};
    return n->get<std::vector<int>>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config: field '" + key +
                                "' must be an integer or integer list");
  }
}

std::vector<double> double_list(const json& doc, const std::string& key,
                                std::vector<double> fallback) {
  const json* n = find_node(doc, key);
  if (!n) return fallback;
  try {
    if (n->is_number()) return {n->get<double>()};
    return n->get<std::vector<double>>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config: field '" + key +
                                "' must be a number or number list");
  }
}

std::vector<double> g2_from_inverse(const std::vector<double>& ginv,
                                    const std::string& key) {
  std::vector<double> g2;
  for (double v : ginv) {
    if (v <= 0.0)
      throw std::invalid_argument("config: field '" + key +
                                  "' entries must be positive");
    g2.push_back(1.0 / v);
  }
  return g2;
}

lgt::SolverOptions solver_options(const json& o) {
  lgt::SolverOptions s;
  s.tol = fetch<double>(o, "solver.tol", s.tol);
  s.krylov_dim = fetch<int>(o, "solver.krylov_dim", s.krylov_dim);
  s.max_restarts = fetch<int>(o, "solver.max_restarts", s.max_restarts);
  s.dense_threshold =
      fetch<std::int64_t>(o, "solver.dense_threshold", s.dense_threshold);
  s.force_iterative =
      fetch<bool>(o, "solver.force_iterative", s.force_iterative);
  s.seed = fetch<std::uint64_t>(o, "seed", s.seed);
  return s;
}

std::vector<lgt::Representation> rep_list(const json& o) {
  std::string rep = fetch<std::string>(o, "rep", "electric");
  if (rep == "electric") return {lgt::Representation::electric};
  if (rep == "magnetic") return {lgt::Representation::magnetic};
  if (rep == "both")
    return {lgt::Representation::electric, lgt::Representation::magnetic};
  throw std::invalid_argument(
      "config: field 'rep' must be electric, magnetic or both");
}

const char* rep_name(lgt::Representation rep) {
  return rep == lgt::Representation::electric ? "electric" : "magnetic";
}

struct RunIo {
  fs::path output;
  fs::path manifest;
  bool force = false;
};

RunIo plan_outputs(const lgt::RunConfig& cfg,
                   const std::string& default_output) {
  RunIo io;
  io.output = fetch<std::string>(cfg.options, "output", default_output);
  io.manifest = fetch<std::string>(cfg.options, "manifest",
                                   io.output.string() + ".manifest.json");
  io.force = fetch<bool>(cfg.options, "force", false);
  lgt::guard_overwrite(io.output, io.force);
  lgt::guard_overwrite(io.manifest, io.force);
  return io;
}

void write_manifest_file(const lgt::RunConfig& cfg, const RunIo& io,
                         double seconds) {
  json manifest = lgt::make_manifest(cfg, {{"total", seconds}});
  std::ofstream out(io.manifest);
  if (!out)
    throw std::runtime_error("cannot open " + io.manifest.string() +
                             " for writing");
  out << manifest.dump(2) << '\n';
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

int cmd_scan_plaquette(const lgt::RunConfig& cfg) {
  Stopwatch clock;
  const json& o = cfg.options;
  auto reps = rep_list(o);
  auto l_grid = int_list(o, "grid.l", {1});
  auto L_grid = int_list(o, "grid.L", {});
  auto ginv = double_list(o, "grid.g2_inverse", {1.0});
  auto g2_grid = g2_from_inverse(ginv, "grid.g2_inverse");
  auto opts = solver_options(o);
  int workers = fetch<int>(o, "workers", 1);
  RunIo io = plan_outputs(cfg, "scan-plaquette.csv");

  CsvWriter csv(io.output, "scan-plaquette/v1",
                {"rep", "l", "L", "g2_inverse", "dim", "energy", "box", "ok",
                 "error"});
  std::size_t rows = 0;
  for (auto rep : reps) {
    auto records = lgt::scan_plaquette(rep, l_grid, L_grid, g2_grid, opts,
                                       workers);
    for (const auto& r : records) {
      csv.row({rep_name(r.rep), std::to_string(r.l), std::to_string(r.L),
               fmt(1.0 / r.g2), std::to_string(r.dim), fmt(r.energy),
               fmt(r.box), r.ok ? "1" : "0", r.error});
      ++rows;
    }
  }
  write_manifest_file(cfg, io, clock.seconds());
  std::cout << "wrote " << io.output.string() << " (" << rows << " records)\n";
  return 0;
}

int cmd_fourier_fidelity(const lgt::RunConfig& cfg) {
  Stopwatch clock;
  const json& o = cfg.options;
  int l = fetch<int>(o, "l", 1);
  double ginv = fetch<double>(o, "g2_inverse", 10.0);
  if (ginv <= 0.0)
    throw std::invalid_argument("config: field 'g2_inverse' must be positive");
  int span = fetch<int>(o, "L_span", 64);
  auto L_grid = int_list(o, "grid.L", lgt::default_L_grid(l, span));
  auto opts = solver_options(o);
  int workers = fetch<int>(o, "workers", 1);
  RunIo io = plan_outputs(cfg, "fourier-fidelity.csv");

  auto scan =
      lgt::maximize_fourier_fidelity(l, 1.0 / ginv, L_grid, opts, workers);
  CsvWriter csv(io.output, "fourier-fidelity/v1",
                {"l", "g2_inverse", "L", "fidelity", "is_best"});
  for (const auto& p : scan.points) {
    bool best = std::find(scan.best_L.begin(), scan.best_L.end(), p.L) !=
                scan.best_L.end();
    csv.row({std::to_string(l), fmt(ginv), std::to_string(p.L), fmt(p.value),
             best ? "1" : "0"});
  }
  write_manifest_file(cfg, io, clock.seconds());
  std::cout << "max fidelity " << fmt(scan.best_value) << " at L="
            << scan.best_L.front() << "; wrote " << io.output.string() << "\n";
  return 0;
}

int cmd_sequence_fidelity(const lgt::RunConfig& cfg) {
  Stopwatch clock;
  const json& o = cfg.options;
  auto l_grid = int_list(o, "grid.l", {2, 3});
  double ginv = fetch<double>(o, "g2_inverse", 10.0);
  if (ginv <= 0.0)
    throw std::invalid_argument("config: field 'g2_inverse' must be positive");
  auto opts = solver_options(o);
  RunIo io = plan_outputs(cfg, "sequence-fidelity.csv");

  CsvWriter csv(io.output, "sequence-fidelity/v1",
                {"l", "g2_inverse", "fidelity", "infidelity"});
  for (int l : l_grid) {
    if (l < 1)
      throw std::invalid_argument("config: field 'grid.l' needs entries >= 1");
    lgt::PlaquetteModel large;
    large.rep = lgt::Representation::electric;
    large.l = l;
    large.g2 = 1.0 / ginv;
    auto gl = lgt::ground_state(lgt::build_plaquette(large).hamiltonian(),
                                opts);
    lgt::VectorCx small;
    if (l == 1) {
      small = lgt::VectorCx::Ones(1);
    } else {
      lgt::PlaquetteModel prev = large;
      prev.l = l - 1;
      small = lgt::ground_state(lgt::build_plaquette(prev).hamiltonian(), opts)
                  .vectors.col(0);
    }
    double f = lgt::sequence_fidelity(small, gl.vectors.col(0), l);
    csv.row({std::to_string(l), fmt(ginv), fmt(f), fmt(1.0 - f)});
  }
  write_manifest_file(cfg, io, clock.seconds());
  std::cout << "wrote " << io.output.string() << "\n";
  return 0;
}

const char* method_name(lgt::LOptMethod m) {
  switch (m) {
    case lgt::LOptMethod::kink: return "kink";
    case lgt::LOptMethod::global_min: return "global-min";
    case lgt::LOptMethod::frozen: return "frozen";
    case lgt::LOptMethod::grid_end: return "grid-end";
  }
  return "unknown";
}

int cmd_l_opt(const lgt::RunConfig& cfg) {
  Stopwatch clock;
  const json& o = cfg.options;
  auto l_grid = int_list(o, "grid.l", {1});
  auto ginv = double_list(o, "grid.g2_inverse", {10.0});
  auto g2_grid = g2_from_inverse(ginv, "grid.g2_inverse");
  int span = fetch<int>(o, "L_span", 64);
  auto opts = solver_options(o);
  RunIo io = plan_outputs(cfg, "l-opt.csv");

  CsvWriter csv(io.output, "l-opt/v1",
                {"l", "g2_inverse", "L", "infidelity", "L_opt", "method",
                 "frozen", "warning"});
  for (int l : l_grid) {
    for (std::size_t gi = 0; gi < g2_grid.size(); ++gi) {
      auto point = lgt::find_L_opt(l, g2_grid[gi], lgt::default_L_grid(l, span),
                                   opts);
      for (std::size_t i = 0; i < point.grid.size(); ++i)
        csv.row({std::to_string(l), fmt(ginv[gi]),
                 std::to_string(point.grid[i]), fmt(point.infidelity[i]),
                 std::to_string(point.L_opt), method_name(point.method),
                 point.frozen ? "1" : "0", point.warning ? "1" : "0"});
    }
  }
  write_manifest_file(cfg, io, clock.seconds());
  std::cout << "wrote " << io.output.string() << "\n";
  return 0;
}

int cmd_g_m(const lgt::RunConfig& cfg) {
  Stopwatch clock;
  const json& o = cfg.options;
  int l = fetch<int>(o, "l", 1);
  auto ginv = double_list(o, "grid.g2_inverse", {});
  if (ginv.size() < 2)
    throw std::invalid_argument(
        "config: field 'grid.g2_inverse' needs at least two points");
  auto g2_grid = g2_from_inverse(ginv, "grid.g2_inverse");
  int span = fetch<int>(o, "L_span", 64);
  auto opts = solver_options(o);
  int workers = fetch<int>(o, "workers", 1);
  RunIo io = plan_outputs(cfg, "g-m.csv");

  auto res = lgt::find_gm(l, g2_grid, lgt::default_L_grid(l, span), opts,
                          workers);
  CsvWriter csv(io.output, "g-m/v1",
                {"l", "g2_inverse", "best_fidelity", "best_L", "is_peak",
                 "ambiguous"});
  for (std::size_t i = 0; i < g2_grid.size(); ++i)
    csv.row({std::to_string(l), fmt(ginv[i]), fmt(res.best_fidelity[i]),
             std::to_string(res.best_L[i]),
             g2_grid[i] == res.g2_m ? "1" : "0", res.ambiguous ? "1" : "0"});
  write_manifest_file(cfg, io, clock.seconds());
  std::cout << "g_m = " << fmt(res.g_m) << " (g2_inverse = "
            << fmt(1.0 / res.g2_m) << "); wrote " << io.output.string()
            << "\n";
  return 0;
}

int cmd_matter_scan(const lgt::RunConfig& cfg) {
  Stopwatch clock;
  const json& o = cfg.options;
  auto reps = rep_list(o);
  int l = fetch<int>(o, "l", 1);
  int L = fetch<int>(o, "L", 2);
  auto ginv = double_list(o, "grid.g2_inverse", {1.0});
  auto g2_grid = g2_from_inverse(ginv, "grid.g2_inverse");
  double mass = fetch<double>(o, "mass", 0.0);
  double kappa = fetch<double>(o, "kappa", 1.0);
  auto opts = solver_options(o);
  int workers = fetch<int>(o, "workers", 1);
  RunIo io = plan_outputs(cfg, "matter-scan.csv");

  struct Row {
    lgt::Representation rep;
    double ginv = 0.0;
    std::int64_t dim = 0;
    double energy = 0.0;
    double box = 0.0;
    bool ok = false;
    std::string error;
  };
  std::vector<Row> rows(reps.size() * g2_grid.size());
  lgt::parallel_for(
      static_cast<int>(rows.size()), workers, [&](int idx) {
        Row& row = rows[idx];
        std::size_t ri = idx / g2_grid.size(), gi = idx % g2_grid.size();
        row.rep = reps[ri];
        row.ginv = ginv[gi];
        try {
          lgt::MatterModel model;
          model.rep = reps[ri];
          model.l = l;
          model.L = L;
          model.g2 = g2_grid[gi];
          model.mass = mass;
          model.kappa = kappa;
          auto sys = lgt::build_matter_plaquette(model);
          auto res = lgt::ground_state(sys.hamiltonian, opts);
          row.dim = sys.dim;
          row.energy = res.values[0];
          row.box = lgt::plaquette_expectation(res.vectors.col(0),
                                               sys.magnetic_part, model.g2);
          row.ok = res.converged;
          if (!row.ok) row.error = "solver did not converge";
        } catch (const std::exception& e) {
          row.error = e.what();
        }
      });

  CsvWriter csv(io.output, "matter-scan/v1",
                {"rep", "l", "L", "g2_inverse", "dim", "energy", "box", "ok",
                 "error"});
  for (const auto& r : rows)
    csv.row({rep_name(r.rep), std::to_string(l), std::to_string(L),
             fmt(r.ginv), std::to_string(r.dim), fmt(r.energy), fmt(r.box),
             r.ok ? "1" : "0", r.error});
  write_manifest_file(cfg, io, clock.seconds());
  std::cout << "wrote " << io.output.string() << " (" << rows.size()
            << " records)\n";
  return 0;
}

lgt::TorusModel torus_model_from(const json& o) {
  lgt::TorusModel model;
  model.nx = fetch<int>(o, "nx", 2);
  model.ny = fetch<int>(o, "ny", 2);
  std::string stats = fetch<std::string>(o, "statistics", "fermionic");
  if (stats == "fermionic") {
    model.statistics = lgt::MatterStatistics::fermionic;
  } else if (stats == "bosonic") {
    model.statistics = lgt::MatterStatistics::bosonic;
  } else {
    throw std::invalid_argument(
        "config: field 'statistics' must be fermionic or bosonic");
  }
  model.l = fetch<int>(o, "l", 1);
  model.g2 = fetch<double>(o, "g2", 1.0);
  model.a = fetch<double>(o, "a", 1.0);
  model.mass = fetch<double>(o, "mass", 0.0);
  model.kappa = fetch<double>(o, "kappa", 1.0);
  model.boson_max_occupation = fetch<int>(o, "boson_max_occupation", 2);
  model.static_charges = fetch<std::vector<int>>(o, "static_charges", {});
  return model;
}

int cmd_torus_gen(const lgt::RunConfig& cfg) {
  Stopwatch clock;
  const json& o = cfg.options;
  lgt::TorusModel model = torus_model_from(o);
  RunIo io = plan_outputs(cfg, "torus-terms.json");
  lgt::TorusBuildOptions build_opts;
  build_opts.build_matrix = false;
  auto build = lgt::build_torus_hamiltonian(model, build_opts);
  json doc = lgt::term_list_to_json(model, build.terms);
  auto violations = lgt::validate_term_list_json(doc);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    throw std::runtime_error("generated term list failed validation");
  }
  std::ofstream out(io.output);
  if (!out)
    throw std::runtime_error("cannot open " + io.output.string() +
                             " for writing");
  out << doc.dump(2) << '\n';
  write_manifest_file(cfg, io, clock.seconds());
  std::cout << "wrote " << io.output.string() << " ("
            << build.terms.terms.size() << " terms, dimension " << build.dim
            << ")\n";
  return 0;
}

std::int64_t capped_power(std::int64_t base, int exp, std::int64_t cap) {
  std::int64_t v = 1;
  for (int k = 0; k < exp; ++k) {
    if (v > cap / base + 1) return cap + 1;
    v *= base;
  }
  return v;
}

int cmd_export_operator(const lgt::RunConfig& cfg) {
  Stopwatch clock;
  const json& o = cfg.options;
  std::string build = fetch<std::string>(o, "build", "plaquette");
  std::string part = fetch<std::string>(o, "part", "hamiltonian");
  std::int64_t cap = fetch<std::int64_t>(o, "cap", 200000);
  RunIo io = plan_outputs(cfg, "operator.mtx");

  lgt::SparseCx matrix;
  if (build == "plaquette" || build == "link") {
    lgt::PlaquetteModel model;
    model.rep = rep_list(o).front();
    model.l = fetch<int>(o, "l", 1);
    model.L = fetch<int>(o, "L", model.l + 1);
    model.g2 = fetch<double>(o, "g2", 1.0);
    model.a = fetch<double>(o, "a", 1.0);
    model.include_strings = fetch<bool>(o, "include_strings", false);
    model.cyclic = fetch<bool>(o, "cyclic", false);
    auto charges = int_list(o, "static_charges", {0, 0, 0});
    if (charges.size() != 3)
      throw std::invalid_argument(
          "config: field 'static_charges' needs three entries here");
    std::copy(charges.begin(), charges.end(), model.static_charges.begin());
    int registers = build == "link" ? 5 : (model.include_strings ? 5 : 3);
    if (capped_power(2 * model.l + 1, registers, cap) > cap)
      throw ResourceCapError("dimension exceeds cap " + std::to_string(cap));
    lgt::HamiltonianParts parts = build == "link"
                                      ? lgt::build_link_formulation(model)
                                      : lgt::build_plaquette(model);
    if (part == "hamiltonian") {
      matrix = parts.hamiltonian();
    } else if (part == "electric") {
      matrix = parts.electric;
    } else if (part == "magnetic") {
      matrix = parts.magnetic;
    } else {
      throw std::invalid_argument(
          "config: field 'part' must be hamiltonian, electric or magnetic");
    }
  } else if (build == "matter") {
    lgt::MatterModel model;
    model.rep = rep_list(o).front();
    model.l = fetch<int>(o, "l", 1);
    model.L = fetch<int>(o, "L", 2);
    model.g2 = fetch<double>(o, "g2", 1.0);
    model.a = fetch<double>(o, "a", 1.0);
    model.mass = fetch<double>(o, "mass", 0.0);
    model.kappa = fetch<double>(o, "kappa", 1.0);
    model.cyclic = fetch<bool>(o, "cyclic", false);
    if (capped_power(2 * model.l + 1, 5, cap / 16) > cap / 16)
      throw ResourceCapError("dimension exceeds cap " + std::to_string(cap));
    auto sys = lgt::build_matter_plaquette(model);
    if (part == "hamiltonian") {
      matrix = sys.hamiltonian;
    } else if (part == "magnetic") {
      matrix = sys.magnetic_part;
    } else {
      throw std::invalid_argument(
          "config: field 'part' must be hamiltonian or magnetic here");
    }
  } else if (build == "torus") {
    lgt::TorusModel model = torus_model_from(o);
    lgt::TorusBuildOptions build_opts;
    build_opts.dimension_cap = cap;
    auto sys = lgt::build_torus_hamiltonian(model, build_opts);
    if (!sys.resource_error.empty()) throw ResourceCapError(sys.resource_error);
    if (part == "hamiltonian") {
      matrix = sys.hamiltonian;
    } else if (part == "magnetic") {
      matrix = sys.magnetic_part;
    } else {
      throw std::invalid_argument(
          "config: field 'part' must be hamiltonian or magnetic here");
    }
  } else {
    throw std::invalid_argument(
        "config: field 'build' must be plaquette, link, matter or torus");
  }

  lgt::write_matrix_market(matrix, io.output);
  write_manifest_file(cfg, io, clock.seconds());
  std::cout << "wrote " << io.output.string() << " (" << matrix.rows() << "x"
            << matrix.cols() << ", " << matrix.nonZeros() << " entries)\n";
  return 0;
}

int cmd_truncation_analysis(const lgt::RunConfig& cfg) {
  Stopwatch clock;
  const json& o = cfg.options;
  int l = fetch<int>(o, "l", 2);
  int L = fetch<int>(o, "L", 4);
  auto ginv = double_list(o, "grid.g2_inverse", {1.0});
  auto g2_grid = g2_from_inverse(ginv, "grid.g2_inverse");
  auto opts = solver_options(o);
  RunIo io = plan_outputs(cfg, "truncation-analysis.csv");

  CsvWriter csv(io.output, "truncation-analysis/v1",
                {"variant", "l", "L", "g2_inverse", "shell", "population",
                 "cumulative", "energy"});
  const std::pair<lgt::TruncationVariant, const char*> variants[] = {
      {lgt::TruncationVariant::cyclic, "cyclic"},
      {lgt::TruncationVariant::band, "band"},
      {lgt::TruncationVariant::wrap_removed, "wrap-removed"},
  };
  for (std::size_t gi = 0; gi < g2_grid.size(); ++gi) {
    for (const auto& [variant, name] : variants) {
      auto profile = lgt::truncation_profile(l, L, g2_grid[gi], variant, opts);
      for (int s = 0; s <= L; ++s)
        csv.row({name, std::to_string(l), std::to_string(L), fmt(ginv[gi]),
                 std::to_string(s), fmt(profile.shell_population(s)),
                 fmt(profile.cumulative(s)), fmt(profile.energy)});
    }
    double leak = lgt::window_leakage(l, L, g2_grid[gi], opts);
    csv.row({"window-leakage", std::to_string(l), std::to_string(L),
             fmt(ginv[gi]), "-1", fmt(leak), fmt(leak), ""});
  }
  write_manifest_file(cfg, io, clock.seconds());
  std::cout << "wrote " << io.output.string() << "\n";
  return 0;
}

struct SubState {
  CLI::App* sub = nullptr;
  std::string config_path;
  std::vector<std::string> sets;
  std::vector<std::pair<CLI::Option*, std::string>> mapped;
  std::vector<std::shared_ptr<std::string>> storage;
  CLI::Option* force = nullptr;

  void add_common() {
    sub->add_option("--config", config_path,
                    "JSON config file (overridden by --set and flags)");
    sub->add_option("--set", sets,
                    "dotted override, e.g. --set solver.tol=1e-9")
        ->take_all();
    map_option("--output", "output", "output file path");
    map_option("--manifest", "manifest",
               "manifest path (default: <output>.manifest.json)");
    map_option("--workers", "workers", "worker threads for grid scans");
    map_option("--seed", "seed", "seed for the iterative eigensolver");
    force = sub->add_flag("--force", "overwrite existing outputs");
  }

  CLI::Option* map_option(const std::string& flag, const std::string& dotted,
                          const std::string& help) {
    auto value = std::make_shared<std::string>();
    storage.push_back(value);
    CLI::Option* opt = sub->add_option(flag, *value, help);
    mapped.emplace_back(opt, dotted);
    return opt;
  }

  json assemble(const std::string& command) const {
    json doc;
    if (!config_path.empty()) {
      lgt::RunConfig file = lgt::load_config(config_path);
      if (file.command != command)
        throw std::invalid_argument("config: file is for command '" +
                                    file.command + "', not '" + command + "'");
      doc = lgt::to_json(file);
    } else {
      doc = json{{"command", command}};
    }
    for (const auto& s : sets) lgt::apply_override(doc, s);
    for (std::size_t i = 0; i < mapped.size(); ++i) {
      const auto& [opt, dotted] = mapped[i];
      if (opt->count() == 0) continue;
      std::string raw = *storage[i];
      if (raw.find(',') != std::string::npos && raw.front() != '[')
        raw = "[" + raw + "]";
      lgt::apply_override(doc, dotted + "=" + raw);
    }
    if (force->count() > 0) lgt::apply_override(doc, "force=true");
    return doc;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ground-state scans, fidelity diagnostics and operator exports for a "
      "compactly truncated lattice gauge model on small periodic lattices"};
  app.require_subcommand(1);

  std::map<std::string, std::function<int(const lgt::RunConfig&)>> dispatch = {
      {"scan-plaquette", cmd_scan_plaquette},
      {"fourier-fidelity", cmd_fourier_fidelity},
      {"sequence-fidelity", cmd_sequence_fidelity},
      {"l-opt", cmd_l_opt},
      {"g-m", cmd_g_m},
      {"matter-scan", cmd_matter_scan},
      {"torus-gen", cmd_torus_gen},
      {"export-operator", cmd_export_operator},
      {"truncation-analysis", cmd_truncation_analysis},
  };

  std::map<std::string, SubState> states;
  auto setup = [&](const std::string& name, const std::string& help) {
    SubState& st = states[name];
    st.sub = app.add_subcommand(name, help);
    st.add_common();
    return &st;
  };

  {
    auto* st = setup("scan-plaquette",
                     "ground energy and plaquette expectation over l/L/"
                     "coupling grids (CSV)");
    st->map_option("--rep", "rep", "electric, magnetic or both");
    st->map_option("--l", "grid.l", "truncation list, e.g. 1,2,3");
    st->map_option("--L-order", "grid.L",
                   "series-order list for the magnetic pipeline");
    st->map_option("--g2-inverse", "grid.g2_inverse",
                   "inverse squared couplings, e.g. 1,10,100");
  }
  {
    auto* st = setup("fourier-fidelity",
                     "transform overlap of the two ground states against the "
                     "series order L (CSV)");
    st->map_option("--l", "l", "flux truncation");
    st->map_option("--g2-inverse", "g2_inverse", "inverse squared coupling");
    st->map_option("--L-span", "L_span", "scan L = l+1 .. l+span");
  }
  {
    auto* st = setup("sequence-fidelity",
                     "overlap of ground states at neighbouring truncations "
                     "(CSV)");
    st->map_option("--l", "grid.l", "truncation list (compares l-1 vs l)");
    st->map_option("--g2-inverse", "g2_inverse", "inverse squared coupling");
  }
  {
    auto* st = setup("l-opt",
                     "greedy optimum of the series order per coupling, with "
                     "the full infidelity curves (CSV)");
    st->map_option("--l", "grid.l", "truncation list");
    st->map_option("--g2-inverse", "grid.g2_inverse",
                   "inverse squared coupling list");
    st->map_option("--L-span", "L_span", "scan L = l+1 .. l+span");
  }
  {
    auto* st = setup("g-m",
                     "coupling of maximal transform fidelity over a coupling "
                     "grid (CSV)");
    st->map_option("--l", "l", "flux truncation");
    st->map_option("--g2-inverse", "grid.g2_inverse",
                   "inverse squared coupling list (>= 2 points)");
    st->map_option("--L-span", "L_span", "scan L = l+1 .. l+span");
  }
  {
    auto* st = setup("matter-scan",
                     "ground observables of the four-site cell with staggered "
                     "matter (CSV)");
    st->map_option("--rep", "rep", "electric, magnetic or both");
    st->map_option("--l", "l", "flux truncation");
    st->map_option("--L-order", "L", "series order (magnetic pipeline)");
    st->map_option("--g2-inverse", "grid.g2_inverse",
                   "inverse squared coupling list");
    st->map_option("--mass", "mass", "staggered mass");
    st->map_option("--kappa", "kappa", "hopping strength");
  }
  {
    auto* st = setup("torus-gen",
                     "generate the Hamiltonian term list of an Nx x Ny "
                     "periodic lattice (JSON)");
    st->map_option("--nx", "nx", "lattice extent in x (>= 2)");
    st->map_option("--ny", "ny", "lattice extent in y (>= 2)");
    st->map_option("--statistics", "statistics", "fermionic or bosonic");
    st->map_option("--l", "l", "flux truncation");
    st->map_option("--g2", "g2", "squared coupling");
    st->map_option("--mass", "mass", "matter mass");
    st->map_option("--kappa", "kappa", "hopping strength");
  }
  {
    auto* st = setup("export-operator",
                     "write a built operator in Matrix Market format");
    st->map_option("--build", "build", "plaquette, link, matter or torus");
    st->map_option("--part", "part", "hamiltonian, electric or magnetic");
    st->map_option("--rep", "rep", "electric or magnetic");
    st->map_option("--l", "l", "flux truncation");
    st->map_option("--L-order", "L", "series order (magnetic pipeline)");
    st->map_option("--g2", "g2", "squared coupling");
    st->map_option("--cap", "cap", "largest allowed dimension");
  }
  {
    auto* st = setup("truncation-analysis",
                     "shell populations and window leakage of ladder "
                     "variants (CSV)");
    st->map_option("--l", "l", "window radius");
    st->map_option("--L-order", "L", "full register radius (> l)");
    st->map_option("--g2-inverse", "grid.g2_inverse",
                   "inverse squared coupling list");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    lgt::RunConfig cfg = lgt::parse_config(states[name].assemble(name));
    return dispatch[name](cfg);
  } catch (const ResourceCapError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
