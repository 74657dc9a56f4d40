#pragma once

#include <filesystem>
#include <iosfwd>

#include "spgemm/triples.hpp"

namespace spgemm {

/// Reads a coordinate-format Matrix Market file (field real, integer or
/// pattern; symmetry general, symmetric or skew-symmetric). File indices are
/// 1-based and converted to 0-based. Symmetric storage is expanded so both
/// triangles are present. Entries are returned in file order and are not
/// normalized; duplicates are left for normalize() to fold.
///
/// Throws ParseError (with line number) on malformed content and IoError when
/// the file cannot be opened.
TriplesMatrix<double> read_matrix_market(std::istream& in);
TriplesMatrix<double> read_matrix_market(const std::filesystem::path& path);

/// Writes `%%MatrixMarket matrix coordinate real general`, 1-based, entries
/// in the given order, values in shortest round-trip decimal form.
void write_matrix_market(std::ostream& out, const TriplesMatrix<double>& t);
void write_matrix_market(const std::filesystem::path& path, const TriplesMatrix<double>& t);

}  // namespace spgemm
