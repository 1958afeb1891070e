#include "spamm/multiply.hpp"

#include <future>
#include <stdexcept>
#include <utility>

#include "node_ops.hpp"
#include "spamm/execution.hpp"

namespace spamm {

namespace {

using detail::NodePtr;

NodePtr leaf_product(const NodePtr& a, const NodePtr& b, int leaf_size) {
  std::vector<double> block(static_cast<std::size_t>(leaf_size) * leaf_size, 0.0);
  detail::leaf_gemm(a->block.data(), b->block.data(), block.data(), leaf_size);
  return detail::make_leaf(std::move(block));
}

NodePtr multiply_exact_node(const NodePtr& a, const NodePtr& b, int size, int leaf_size,
                            int spawn);

NodePtr multiply_exact_quadrant(const NodePtr& a, const NodePtr& b, int row, int col, int half,
                                int leaf_size, int spawn) {
  NodePtr t0 = multiply_exact_node(a->child[detail::child_index(row, 0)],
                                   b->child[detail::child_index(0, col)], half, leaf_size, spawn);
  NodePtr t1 = multiply_exact_node(a->child[detail::child_index(row, 1)],
                                   b->child[detail::child_index(1, col)], half, leaf_size, spawn);
  return detail::add_nodes(t0, t1, half, leaf_size);
}

NodePtr multiply_exact_node(const NodePtr& a, const NodePtr& b, int size, int leaf_size,
                            int spawn) {
  if (!a || !b) return nullptr;
  if (size == leaf_size) return leaf_product(a, b, leaf_size);
  const int half = size / 2;
  std::array<NodePtr, 4> child;
  if (spawn > 0) {
    std::array<std::future<NodePtr>, 4> task;
    for (int row = 0; row < 2; ++row)
      for (int col = 0; col < 2; ++col)
        task[detail::child_index(row, col)] =
            std::async(std::launch::async, [&, row, col] {
              return multiply_exact_quadrant(a, b, row, col, half, leaf_size, spawn - 1);
            });
    for (int idx = 0; idx < 4; ++idx) child[idx] = task[idx].get();
  } else {
    for (int row = 0; row < 2; ++row)
      for (int col = 0; col < 2; ++col)
        child[detail::child_index(row, col)] =
            multiply_exact_quadrant(a, b, row, col, half, leaf_size, 0);
  }
  return detail::make_inner(std::move(child));
}

NodePtr spamm_node(const NodePtr& a, const NodePtr& b, double tau, int size, int leaf_size,
                   int spawn);

NodePtr spamm_quadrant(const NodePtr& a, const NodePtr& b, double tau, int row, int col, int half,
                       int leaf_size, int spawn) {
  NodePtr t0 = spamm_node(a->child[detail::child_index(row, 0)],
                          b->child[detail::child_index(0, col)], tau, half, leaf_size, spawn);
  NodePtr t1 = spamm_node(a->child[detail::child_index(row, 1)],
                          b->child[detail::child_index(1, col)], tau, half, leaf_size, spawn);
  return detail::add_nodes(t0, t1, half, leaf_size);
}

NodePtr spamm_node(const NodePtr& a, const NodePtr& b, double tau, int size, int leaf_size,
                   int spawn) {
  if (!a || !b) return nullptr;
  if (a->norm * b->norm < tau) return nullptr;
  if (size == leaf_size) return leaf_product(a, b, leaf_size);
  const int half = size / 2;
  std::array<NodePtr, 4> child;
  if (spawn > 0) {
    std::array<std::future<NodePtr>, 4> task;
    for (int row = 0; row < 2; ++row)
      for (int col = 0; col < 2; ++col)
        task[detail::child_index(row, col)] = std::async(std::launch::async, [&, row, col] {
          return spamm_quadrant(a, b, tau, row, col, half, leaf_size, spawn - 1);
        });
    for (int idx = 0; idx < 4; ++idx) child[idx] = task[idx].get();
  } else {
    for (int row = 0; row < 2; ++row)
      for (int col = 0; col < 2; ++col)
        child[detail::child_index(row, col)] =
            spamm_quadrant(a, b, tau, row, col, half, leaf_size, 0);
  }
  return detail::make_inner(std::move(child));
}

void check_conformable(const QuadTreeMatrix& a, const QuadTreeMatrix& b) {
  if (a.dimension() != b.dimension() || a.leaf_size() != b.leaf_size()) {
    throw std::invalid_argument("multiply: dimension or leaf size mismatch");
  }
}

}  // namespace

QuadTreeMatrix multiply_exact(const QuadTreeMatrix& a, const QuadTreeMatrix& b) {
  check_conformable(a, b);
  NodePtr root = multiply_exact_node(a.root(), b.root(), a.padded_dimension(), a.leaf_size(),
                                     exec::spawn_levels());
  return QuadTreeMatrix::wrap(std::move(root), a.dimension(), a.leaf_size());
}

QuadTreeMatrix spamm_multiply(const QuadTreeMatrix& a, const QuadTreeMatrix& b,
                              SpammTolerance tolerance) {
  check_conformable(a, b);
  if (tolerance.tau < 0.0) throw std::invalid_argument("spamm: tau must be nonnegative");
  NodePtr root = spamm_node(a.root(), b.root(), tolerance.tau, a.padded_dimension(), a.leaf_size(),
                            exec::spawn_levels());
  return QuadTreeMatrix::wrap(std::move(root), a.dimension(), a.leaf_size());
}

}  // namespace spamm
