#pragma once

#include <filesystem>
#include <iosfwd>

#include "lgt/core.hpp"

namespace lgt {

/// Writes a sparse complex matrix in Matrix Market coordinate format
/// ("complex general", 1-based indices).  Values are printed with 17
/// significant digits so a read of the output reproduces every coefficient
/// bit-exactly.  Entries are emitted column-major in storage order, which is
/// deterministic for a compressed matrix.
void write_matrix_market(const SparseCx& m, std::ostream& out);
void write_matrix_market(const SparseCx& m,
                         const std::filesystem::path& path);

/// Reads a matrix written by write_matrix_market (any "coordinate complex
/// general" file).  Throws std::runtime_error on malformed input.
SparseCx read_matrix_market(std::istream& in);
SparseCx read_matrix_market(const std::filesystem::path& path);

}  // namespace lgt
