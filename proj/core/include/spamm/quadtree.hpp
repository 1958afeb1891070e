#pragma once
//
// Project     : spamm-ec
// Module      : quadtree
// Description : quadtree sparse matrix with cached Frobenius norms
//

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "spamm/dense_matrix.hpp"

namespace spamm {

struct CoordinateEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Square sparse matrix stored as a quadtree. A quadrant is either flagged
/// identically zero, a dense column-major leaf block, or composed of four
/// recursively stored quadrants. Every reachable node caches the Frobenius
/// norm of its subtree; identically zero quadrants are left out of the
/// representation entirely (a null child pointer).
///
/// The logical dimension is padded up to leaf_size * 2^k; the padding region
/// holds implicit zeros and is never stored. Matrices are immutable after
/// construction: all operations return new values and share unchanged
/// subtrees, so instances may be read concurrently.
class QuadTreeMatrix {
 public:
  static constexpr int kDefaultLeafSize = 32;

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  /// A null NodePtr stands for an identically zero quadrant, so `norm` of a
  /// reachable node is zero only if the node stores explicit zeros; such
  /// nodes are collapsed away by construction and arithmetic.
  struct Node {
    double norm = 0.0;
    std::vector<double> block;       // leaf payload, column-major; empty on inner nodes
    std::array<NodePtr, 4> child{};  // inner payload, indexed [2*row + col]
    bool is_leaf() const noexcept { return !block.empty(); }
  };

  QuadTreeMatrix() = default;

  static QuadTreeMatrix zero(int dimension, int leaf_size = kDefaultLeafSize);
  static QuadTreeMatrix identity(int dimension, int leaf_size = kDefaultLeafSize);

  /// Build from a coordinate list. Throws std::out_of_range for indices
  /// outside [0, dimension) and std::invalid_argument for duplicate (row, col)
  /// pairs. Quadrants without entries become zero nodes; norms are cached
  /// bottom-up.
  static QuadTreeMatrix from_coordinates(std::span<const CoordinateEntry> entries,
                                         int dimension,
                                         int leaf_size = kDefaultLeafSize);

  static QuadTreeMatrix from_dense(const DenseMatrix& dense, int leaf_size = kDefaultLeafSize);

  int dimension() const noexcept { return dimension_; }
  int padded_dimension() const noexcept { return padded_dimension_; }
  int leaf_size() const noexcept { return leaf_size_; }
  const NodePtr& root() const noexcept { return root_; }
  bool is_zero() const noexcept { return root_ == nullptr; }

  /// Cached Frobenius norm of the whole matrix.
  double frobenius_norm() const noexcept { return root_ ? root_->norm : 0.0; }

  double trace() const;

  /// Number of stored entries with value != 0.
  std::int64_t nnz() const;
  /// Number of non-zero leaf blocks.
  std::int64_t nnz_blocks() const;

  DenseMatrix to_dense() const;         // logical dimension, padding dropped
  DenseMatrix to_dense_padded() const;  // padded dimension, includes the implicit zeros

  QuadTreeMatrix scale(double alpha) const;

  /// Wrap an already-built node tree. Internal plumbing for the arithmetic
  /// modules; `root` must respect the structural invariants.
  static QuadTreeMatrix wrap(NodePtr root, int dimension, int leaf_size);

 private:
  int dimension_ = 0;
  int padded_dimension_ = 0;
  int leaf_size_ = 0;
  NodePtr root_;
};

/// Entrywise sum. Zero inputs are returned structurally unchanged; leaf
/// blocks and inner nodes whose sum vanishes collapse to zero nodes.
/// Throws std::invalid_argument on dimension or leaf size mismatch.
QuadTreeMatrix add(const QuadTreeMatrix& a, const QuadTreeMatrix& b);

}  // namespace spamm
