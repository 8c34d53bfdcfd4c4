#include "lgt/matrix_market.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgt {

void write_matrix_market(const SparseCx& m, std::ostream& out) {
  SparseCx c = m;
  c.makeCompressed();
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << c.rows() << ' ' << c.cols() << ' ' << c.nonZeros() << '\n';
  char line[96];
  for (int k = 0; k < c.outerSize(); ++k) {
    for (SparseCx::InnerIterator it(c, k); it; ++it) {
      std::snprintf(line, sizeof line, "%lld %lld %.17g %.17g\n",
                    static_cast<long long>(it.row() + 1),
                    static_cast<long long>(it.col() + 1), it.value().real(),
                    it.value().imag());
      out << line;
    }
  }
}

void write_matrix_market(const SparseCx& m,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrix_market(m, out);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

SparseCx read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("matrix market: empty input");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || object != "matrix" ||
      format != "coordinate" || field != "complex" || symmetry != "general")
    throw std::runtime_error(
        "matrix market: expected 'matrix coordinate complex general' header");

  std::string line;
  long long rows = 0, cols = 0, nnz = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> nnz))
      throw std::runtime_error("matrix market: malformed size line");
    break;
  }
  if (rows <= 0 || cols <= 0 || nnz < 0)
    throw std::runtime_error("matrix market: missing or invalid size line");

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  while (static_cast<long long>(entries.size()) < nnz &&
         std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    long long r = 0, c = 0;
    double re = 0.0, im = 0.0;
    if (!(ls >> r >> c >> re >> im))
      throw std::runtime_error("matrix market: malformed entry line");
    if (r < 1 || r > rows || c < 1 || c > cols)
      throw std::runtime_error("matrix market: entry index out of range");
    entries.emplace_back(static_cast<int>(r - 1), static_cast<int>(c - 1),
                         cplx(re, im));
  }
  if (static_cast<long long>(entries.size()) != nnz)
    throw std::runtime_error("matrix market: fewer entries than announced");

  SparseCx m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

SparseCx read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix_market(in);
}

}  // namespace lgt
