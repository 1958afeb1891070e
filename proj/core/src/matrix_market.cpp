#include "spamm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spamm {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void gather_entries(const QuadTreeMatrix::NodePtr& node, int row0, int col0, int size,
                    int leaf_size, int dimension, std::vector<CoordinateEntry>& out) {
  if (!node) return;
  if (node->is_leaf()) {
    for (int j = 0; j < leaf_size && col0 + j < dimension; ++j)
      for (int i = 0; i < leaf_size && row0 + i < dimension; ++i) {
        const double v = node->block[i + static_cast<std::size_t>(j) * leaf_size];
        if (v != 0.0) out.push_back({row0 + i, col0 + j, v});
      }
    return;
  }
  const int half = size / 2;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      gather_entries(node->child[2 * r + c], row0 + r * half, col0 + c * half, half, leaf_size,
                     dimension, out);
}

}  // namespace

CoordinateData read_matrix_market(std::istream& in) {
  std::string banner;
  if (!std::getline(in, banner)) throw std::runtime_error("matrix market: empty stream");

  std::istringstream header(banner);
  std::string tag, object, format, field, symmetry;
  header >> tag >> object >> format >> field >> symmetry;
  if (to_lower(tag) != "%%matrixmarket") {
    throw std::runtime_error("matrix market: missing %%MatrixMarket banner");
  }
  if (to_lower(object) != "matrix" || to_lower(format) != "coordinate" ||
      to_lower(field) != "real" || to_lower(symmetry) != "general") {
    throw std::invalid_argument("matrix market: only 'matrix coordinate real general' is supported");
  }

  std::string line;
  long long rows = 0, cols = 0, count = 0;
  bool have_size = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> count)) {
      throw std::runtime_error("matrix market: malformed size line");
    }
    have_size = true;
    break;
  }
  if (!have_size) throw std::runtime_error("matrix market: missing size line");
  if (rows != cols) throw std::invalid_argument("matrix market: rectangular matrices are not supported");
  if (rows <= 0) throw std::runtime_error("matrix market: dimension must be positive");

  CoordinateData data;
  data.dimension = static_cast<int>(rows);
  data.entries.reserve(static_cast<std::size_t>(count));
  long long seen = 0;
  while (seen < count) {
    if (!std::getline(in, line)) throw std::runtime_error("matrix market: unexpected end of entries");
    if (line.empty() || line[0] == '%') continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double value = 0.0;
    if (!(entry >> i >> j >> value)) throw std::runtime_error("matrix market: malformed entry line");
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw std::runtime_error("matrix market: entry index out of range");
    }
    data.entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), value});
    ++seen;
  }
  return data;
}

CoordinateData read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("matrix market: cannot open '" + path + "' for reading");
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const QuadTreeMatrix& x) {
  std::vector<CoordinateEntry> entries;
  gather_entries(x.root(), 0, 0, x.padded_dimension(), x.leaf_size(), x.dimension(), entries);
  std::sort(entries.begin(), entries.end(), [](const CoordinateEntry& a, const CoordinateEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  out << "%%MatrixMarket matrix coordinate real general\n";
  out << x.dimension() << ' ' << x.dimension() << ' ' << entries.size() << '\n';
  char buffer[64];
  for (const CoordinateEntry& e : entries) {
    std::snprintf(buffer, sizeof buffer, "%d %d %.17g\n", e.row + 1, e.col + 1, e.value);
    out << buffer;
  }
}

void write_matrix_market_file(const std::string& path, const QuadTreeMatrix& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("matrix market: cannot open '" + path + "' for writing");
  write_matrix_market(out, x);
}

}  // namespace spamm
