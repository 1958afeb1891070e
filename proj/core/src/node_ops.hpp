#pragma once
//
// Internal node-level helpers shared by the quadtree arithmetic kernels.
// Not installed.
//

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "spamm/quadtree.hpp"

namespace spamm::detail {

using Node = QuadTreeMatrix::Node;
using NodePtr = QuadTreeMatrix::NodePtr;

inline constexpr int child_index(int row, int col) noexcept { return 2 * row + col; }

/// Sum of squares in ascending storage order, then sqrt. The fixed order is
/// part of the determinism contract.
inline double block_norm(const std::vector<double>& block) {
  double sumsq = 0.0;
  for (const double v : block) sumsq += v * v;
  return std::sqrt(sumsq);
}

inline double combine_child_norms(const std::array<NodePtr, 4>& child) {
  double sumsq = 0.0;
  for (const NodePtr& c : child) {
    if (c) sumsq += c->norm * c->norm;
  }
  return std::sqrt(sumsq);
}

/// Wrap a dense block as a leaf node; an all-zero block collapses to the
/// zero marker (null).
inline NodePtr make_leaf(std::vector<double> block) {
  bool all_zero = true;
  for (const double v : block) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) return nullptr;
  auto node = std::make_shared<Node>();
  node->norm = block_norm(block);
  node->block = std::move(block);
  return node;
}

/// Wrap four quadrants as an inner node; four zero children collapse to the
/// zero marker (null).
inline NodePtr make_inner(std::array<NodePtr, 4> child) {
  if (!child[0] && !child[1] && !child[2] && !child[3]) return nullptr;
  auto node = std::make_shared<Node>();
  node->norm = combine_child_norms(child);
  node->child = std::move(child);
  return node;
}

/// Entrywise node sum; shares the other operand when one side is zero.
NodePtr add_nodes(const NodePtr& a, const NodePtr& b, int size, int leaf_size);

/// c += a * b for column-major leaf_size x leaf_size blocks. Per output
/// element the k index ascends; the loop order is fixed (no re-association).
void leaf_gemm(const double* a, const double* b, double* c, int leaf_size);

int padded_dimension_for(int dimension, int leaf_size);

}  // namespace spamm::detail
