#include "spamm/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "node_ops.hpp"

namespace spamm {

namespace detail {

int padded_dimension_for(int dimension, int leaf_size) {
  int padded = leaf_size;
  while (padded < dimension) {
    if (padded > (1 << 29)) throw std::invalid_argument("dimension too large to pad");
    padded *= 2;
  }
  return padded;
}

NodePtr add_nodes(const NodePtr& a, const NodePtr& b, int size, int leaf_size) {
  if (!a) return b;
  if (!b) return a;
  if (size == leaf_size) {
    std::vector<double> sum(a->block.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a->block[i] + b->block[i];
    return make_leaf(std::move(sum));
  }
  const int half = size / 2;
  std::array<NodePtr, 4> child;
  for (int idx = 0; idx < 4; ++idx) child[idx] = add_nodes(a->child[idx], b->child[idx], half, leaf_size);
  return make_inner(std::move(child));
}

void leaf_gemm(const double* a, const double* b, double* c, int leaf_size) {
  const int L = leaf_size;
  for (int j = 0; j < L; ++j) {
    double* cj = c + static_cast<std::size_t>(j) * L;
    for (int k = 0; k < L; ++k) {
      const double bkj = b[k + static_cast<std::size_t>(j) * L];
      if (bkj == 0.0) continue;  // exact no-op, skipping keeps results bitwise identical
      const double* ak = a + static_cast<std::size_t>(k) * L;
      for (int i = 0; i < L; ++i) cj[i] += ak[i] * bkj;
    }
  }
}

namespace {

void validate_shape(int dimension, int leaf_size) {
  if (dimension <= 0) throw std::invalid_argument("dimension must be positive");
  if (leaf_size <= 0) throw std::invalid_argument("leaf_size must be positive");
}

// Recursive builder over a span of unique in-range entries. Coordinates are
// relative to the (row0, col0) corner of the current quadrant.
NodePtr build_from_entries(std::span<CoordinateEntry> entries, int row0, int col0, int size,
                           int leaf_size) {
  if (entries.empty()) return nullptr;
  if (size == leaf_size) {
    std::vector<double> block(static_cast<std::size_t>(leaf_size) * leaf_size, 0.0);
    for (const CoordinateEntry& e : entries) {
      block[(e.row - row0) + static_cast<std::size_t>(e.col - col0) * leaf_size] = e.value;
    }
    return make_leaf(std::move(block));
  }
  const int half = size / 2;
  auto* first = entries.data();
  auto* last = first + entries.size();
  auto* row_split = std::partition(first, last, [&](const CoordinateEntry& e) { return e.row < row0 + half; });
  auto* top_split = std::partition(first, row_split, [&](const CoordinateEntry& e) { return e.col < col0 + half; });
  auto* bottom_split = std::partition(row_split, last, [&](const CoordinateEntry& e) { return e.col < col0 + half; });

  std::array<NodePtr, 4> child;
  child[child_index(0, 0)] =
      build_from_entries({first, top_split}, row0, col0, half, leaf_size);
  child[child_index(0, 1)] =
      build_from_entries({top_split, row_split}, row0, col0 + half, half, leaf_size);
  child[child_index(1, 0)] =
      build_from_entries({row_split, bottom_split}, row0 + half, col0, half, leaf_size);
  child[child_index(1, 1)] =
      build_from_entries({bottom_split, last}, row0 + half, col0 + half, half, leaf_size);
  return make_inner(std::move(child));
}

NodePtr build_from_dense(const DenseMatrix& dense, int row0, int col0, int size, int leaf_size) {
  const int n = dense.dimension();
  if (row0 >= n || col0 >= n) return nullptr;  // quadrant entirely in the padding
  if (size == leaf_size) {
    std::vector<double> block(static_cast<std::size_t>(leaf_size) * leaf_size, 0.0);
    const int rows = std::min(leaf_size, n - row0);
    const int cols = std::min(leaf_size, n - col0);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i)
        block[i + static_cast<std::size_t>(j) * leaf_size] = dense(row0 + i, col0 + j);
    return make_leaf(std::move(block));
  }
  const int half = size / 2;
  std::array<NodePtr, 4> child;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      child[child_index(r, c)] =
          build_from_dense(dense, row0 + r * half, col0 + c * half, half, leaf_size);
  return make_inner(std::move(child));
}

void write_dense(const NodePtr& node, DenseMatrix& out, int row0, int col0, int size,
                 int leaf_size, int limit) {
  if (!node) return;
  if (node->is_leaf()) {
    const int rows = std::min(leaf_size, limit - row0);
    const int cols = std::min(leaf_size, limit - col0);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i)
        out(row0 + i, col0 + j) = node->block[i + static_cast<std::size_t>(j) * leaf_size];
    return;
  }
  const int half = size / 2;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      write_dense(node->child[child_index(r, c)], out, row0 + r * half, col0 + c * half, half,
                  leaf_size, limit);
}

double node_trace(const NodePtr& node, int size, int leaf_size) {
  if (!node) return 0.0;
  if (node->is_leaf()) {
    double sum = 0.0;
    for (int i = 0; i < leaf_size; ++i) sum += node->block[i + static_cast<std::size_t>(i) * leaf_size];
    return sum;
  }
  const int half = size / 2;
  return node_trace(node->child[detail::child_index(0, 0)], half, leaf_size) +
         node_trace(node->child[detail::child_index(1, 1)], half, leaf_size);
}

std::int64_t node_nnz(const NodePtr& node) {
  if (!node) return 0;
  if (node->is_leaf()) {
    std::int64_t count = 0;
    for (const double v : node->block)
      if (v != 0.0) ++count;
    return count;
  }
  std::int64_t count = 0;
  for (const NodePtr& c : node->child) count += node_nnz(c);
  return count;
}

std::int64_t node_nnz_blocks(const NodePtr& node) {
  if (!node) return 0;
  if (node->is_leaf()) return 1;
  std::int64_t count = 0;
  for (const NodePtr& c : node->child) count += node_nnz_blocks(c);
  return count;
}

NodePtr scale_node(const NodePtr& node, double alpha) {
  if (!node) return nullptr;
  if (node->is_leaf()) {
    std::vector<double> scaled(node->block.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = alpha * node->block[i];
    return make_leaf(std::move(scaled));
  }
  std::array<NodePtr, 4> child;
  for (int idx = 0; idx < 4; ++idx) child[idx] = scale_node(node->child[idx], alpha);
  return make_inner(std::move(child));
}

}  // namespace

}  // namespace detail

QuadTreeMatrix QuadTreeMatrix::wrap(NodePtr root, int dimension, int leaf_size) {
  QuadTreeMatrix m;
  m.dimension_ = dimension;
  m.padded_dimension_ = detail::padded_dimension_for(dimension, leaf_size);
  m.leaf_size_ = leaf_size;
  m.root_ = std::move(root);
  return m;
}

QuadTreeMatrix QuadTreeMatrix::zero(int dimension, int leaf_size) {
  detail::validate_shape(dimension, leaf_size);
  return wrap(nullptr, dimension, leaf_size);
}

QuadTreeMatrix QuadTreeMatrix::identity(int dimension, int leaf_size) {
  detail::validate_shape(dimension, leaf_size);
  std::vector<CoordinateEntry> diag(static_cast<std::size_t>(dimension));
  for (int i = 0; i < dimension; ++i) diag[i] = {i, i, 1.0};
  return from_coordinates(diag, dimension, leaf_size);
}

QuadTreeMatrix QuadTreeMatrix::from_coordinates(std::span<const CoordinateEntry> entries,
                                                int dimension, int leaf_size) {
  detail::validate_shape(dimension, leaf_size);
  std::vector<CoordinateEntry> sorted(entries.begin(), entries.end());
  for (const CoordinateEntry& e : sorted) {
    if (e.row < 0 || e.row >= dimension || e.col < 0 || e.col >= dimension) {
      throw std::out_of_range("coordinate (" + std::to_string(e.row) + ", " +
                              std::to_string(e.col) + ") outside dimension " +
                              std::to_string(dimension));
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const CoordinateEntry& a, const CoordinateEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].row == sorted[i - 1].row && sorted[i].col == sorted[i - 1].col) {
      throw std::invalid_argument("duplicate coordinate (" + std::to_string(sorted[i].row) + ", " +
                                  std::to_string(sorted[i].col) + ")");
    }
  }
  const int padded = detail::padded_dimension_for(dimension, leaf_size);
  NodePtr root = detail::build_from_entries(sorted, 0, 0, padded, leaf_size);
  QuadTreeMatrix m = wrap(std::move(root), dimension, leaf_size);
  return m;
}

QuadTreeMatrix QuadTreeMatrix::from_dense(const DenseMatrix& dense, int leaf_size) {
  detail::validate_shape(dense.dimension(), leaf_size);
  const int padded = detail::padded_dimension_for(dense.dimension(), leaf_size);
  NodePtr root = detail::build_from_dense(dense, 0, 0, padded, leaf_size);
  return wrap(std::move(root), dense.dimension(), leaf_size);
}

double QuadTreeMatrix::trace() const { return detail::node_trace(root_, padded_dimension_, leaf_size_); }

std::int64_t QuadTreeMatrix::nnz() const { return detail::node_nnz(root_); }

std::int64_t QuadTreeMatrix::nnz_blocks() const { return detail::node_nnz_blocks(root_); }

DenseMatrix QuadTreeMatrix::to_dense() const {
  DenseMatrix out(dimension_);
  detail::write_dense(root_, out, 0, 0, padded_dimension_, leaf_size_, dimension_);
  return out;
}

DenseMatrix QuadTreeMatrix::to_dense_padded() const {
  DenseMatrix out(padded_dimension_);
  detail::write_dense(root_, out, 0, 0, padded_dimension_, leaf_size_, padded_dimension_);
  return out;
}

QuadTreeMatrix QuadTreeMatrix::scale(double alpha) const {
  if (alpha == 0.0) return wrap(nullptr, dimension_, leaf_size_);
  return wrap(detail::scale_node(root_, alpha), dimension_, leaf_size_);
}

QuadTreeMatrix add(const QuadTreeMatrix& a, const QuadTreeMatrix& b) {
  if (a.dimension() != b.dimension() || a.leaf_size() != b.leaf_size()) {
    throw std::invalid_argument("add: dimension or leaf size mismatch");
  }
  return QuadTreeMatrix::wrap(
      detail::add_nodes(a.root(), b.root(), a.padded_dimension(), a.leaf_size()), a.dimension(),
      a.leaf_size());
}

}  // namespace spamm
