#pragma once
//
// Project     : spamm-ec
// Module      : matrix_market
// Description : MatrixMarket coordinate (real, general) read/write
//

#include <iosfwd>
#include <string>
#include <vector>

#include "spamm/quadtree.hpp"

namespace spamm {

struct CoordinateData {
  int dimension = 0;
  std::vector<CoordinateEntry> entries;
};

/// Parse a `%%MatrixMarket matrix coordinate real general` stream with
/// 1-based indices. Only square matrices are accepted. Throws
/// std::runtime_error on malformed input and std::invalid_argument for
/// unsupported banners (pattern/complex/symmetric) or rectangular sizes.
CoordinateData read_matrix_market(std::istream& in);
CoordinateData read_matrix_market_file(const std::string& path);

/// Write the stored nonzeros in row-major order, 1-based, with 17 significant
/// digits (values round-trip bitwise).
void write_matrix_market(std::ostream& out, const QuadTreeMatrix& x);
void write_matrix_market_file(const std::string& path, const QuadTreeMatrix& x);

}  // namespace spamm
