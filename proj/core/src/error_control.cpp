#include "spamm/error_control.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <optional>
#include <stdexcept>
#include <utility>

#include "node_ops.hpp"
#include "spamm/execution.hpp"

namespace spamm {

namespace {

using detail::NodePtr;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// CSE
// ---------------------------------------------------------------------------

std::vector<double> cse_node(const NodePtr& a, const NodePtr& b, int size, int leaf_size,
                             const std::vector<double>& taus, int spawn);

// (E_0 + E_1) for one output quadrant.
std::vector<double> cse_quadrant(const NodePtr& a, const NodePtr& b, int row, int col, int half,
                                 int leaf_size, const std::vector<double>& taus, int spawn) {
  std::vector<double> e0 = cse_node(a->child[detail::child_index(row, 0)],
                                    b->child[detail::child_index(0, col)], half, leaf_size, taus,
                                    spawn);
  std::vector<double> e1 = cse_node(a->child[detail::child_index(row, 1)],
                                    b->child[detail::child_index(1, col)], half, leaf_size, taus,
                                    spawn);
  for (std::size_t k = 0; k < e0.size(); ++k) e0[k] += e1[k];
  return e0;
}

std::vector<double> cse_node(const NodePtr& a, const NodePtr& b, int size, int leaf_size,
                             const std::vector<double>& taus, int spawn) {
  std::vector<double> errors(taus.size(), 0.0);
  if (!a || !b) return errors;
  const double norm_product = a->norm * b->norm;
  if (norm_product == 0.0) return errors;
  if (size == leaf_size) {
    for (std::size_t k = 0; k < taus.size(); ++k)
      if (norm_product < taus[k]) errors[k] = norm_product;
    return errors;
  }
  const int half = size / 2;
  std::array<std::vector<double>, 4> contribution;
  if (spawn > 0) {
    std::array<std::future<std::vector<double>>, 4> task;
    for (int row = 0; row < 2; ++row)
      for (int col = 0; col < 2; ++col)
        task[detail::child_index(row, col)] = std::async(std::launch::async, [&, row, col] {
          return cse_quadrant(a, b, row, col, half, leaf_size, taus, spawn - 1);
        });
    for (int idx = 0; idx < 4; ++idx) contribution[idx] = task[idx].get();
  } else {
    for (int row = 0; row < 2; ++row)
      for (int col = 0; col < 2; ++col)
        contribution[detail::child_index(row, col)] =
            cse_quadrant(a, b, row, col, half, leaf_size, taus, 0);
  }
  // Fixed quadrant order: errors += contribution^2, Hadamard.
  for (int idx = 0; idx < 4; ++idx)
    for (std::size_t k = 0; k < errors.size(); ++k)
      errors[k] += contribution[idx][k] * contribution[idx][k];
  for (double& e : errors) e = std::sqrt(e);
  return errors;
}

std::optional<std::size_t> select_index(const ErrorBoundVector& bounds, const ToleranceGrid& grid,
                                        double delta) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (bounds.bounds[k] < delta) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Truncation
// ---------------------------------------------------------------------------

struct LeafRef {
  double norm = 0.0;
  std::int64_t position = 0;  // block_row * blocks_per_side + block_col
};

void collect_leaves(const NodePtr& node, int size, int leaf_size, std::int64_t block_row,
                    std::int64_t block_col, std::int64_t blocks_per_side,
                    std::vector<LeafRef>& out) {
  if (!node) return;
  if (node->is_leaf()) {
    out.push_back({node->norm, block_row * blocks_per_side + block_col});
    return;
  }
  const int half = size / 2;
  const std::int64_t span = half / leaf_size;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      collect_leaves(node->child[detail::child_index(r, c)], half, leaf_size,
                     block_row + r * span, block_col + c * span, blocks_per_side, out);
}

NodePtr drop_leaves(const NodePtr& node, int size, int leaf_size, std::int64_t block_row,
                    std::int64_t block_col, std::int64_t blocks_per_side,
                    const std::vector<char>& removed) {
  if (!node) return nullptr;
  if (node->is_leaf()) {
    return removed[block_row * blocks_per_side + block_col] ? nullptr : node;
  }
  const int half = size / 2;
  const std::int64_t span = half / leaf_size;
  std::array<NodePtr, 4> child;
  bool changed = false;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const int idx = detail::child_index(r, c);
      child[idx] = drop_leaves(node->child[idx], half, leaf_size, block_row + r * span,
                               block_col + c * span, blocks_per_side, removed);
      changed = changed || child[idx] != node->child[idx];
    }
  if (!changed) return node;  // untouched subtree keeps its cached norms
  return detail::make_inner(std::move(child));
}

}  // namespace

ToleranceGrid::ToleranceGrid(std::vector<double> taus) : taus_(std::move(taus)) {
  if (taus_.empty()) throw std::invalid_argument("tolerance grid must be nonempty");
  for (std::size_t k = 0; k < taus_.size(); ++k) {
    if (!(taus_[k] > 0.0)) throw std::invalid_argument("tolerance grid entries must be positive");
    if (k > 0 && !(taus_[k] < taus_[k - 1]))
      throw std::invalid_argument("tolerance grid must be strictly decreasing");
  }
}

ToleranceGrid ToleranceGrid::geometric(double start, double ratio, int count) {
  if (!(start > 0.0)) throw std::invalid_argument("grid start must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("grid ratio must be in (0, 1)");
  if (count < 1) throw std::invalid_argument("grid count must be at least 1");
  std::vector<double> taus(static_cast<std::size_t>(count));
  double tau = start;
  for (int k = 0; k < count; ++k) {
    taus[k] = tau;
    tau *= ratio;
  }
  return ToleranceGrid(std::move(taus));
}

ErrorBoundVector cse(const QuadTreeMatrix& a, const QuadTreeMatrix& b, const ToleranceGrid& grid) {
  if (a.dimension() != b.dimension() || a.leaf_size() != b.leaf_size()) {
    throw std::invalid_argument("cse: dimension or leaf size mismatch");
  }
  return ErrorBoundVector{cse_node(a.root(), b.root(), a.padded_dimension(), a.leaf_size(),
                                   grid.taus(), exec::spawn_levels())};
}

SpammTolerance select_tolerance(const ErrorBoundVector& bounds, const ToleranceGrid& grid,
                                double delta) {
  const auto k = select_index(bounds, grid, delta);
  return SpammTolerance{k ? grid.taus()[*k] : 0.0};
}

TruncationResult truncate(const QuadTreeMatrix& x, double delta) {
  if (delta < 0.0) throw std::invalid_argument("truncate: delta must be nonnegative");
  const std::int64_t blocks_per_side = x.padded_dimension() / x.leaf_size();

  std::vector<LeafRef> leaves;
  collect_leaves(x.root(), x.padded_dimension(), x.leaf_size(), 0, 0, blocks_per_side, leaves);
  std::sort(leaves.begin(), leaves.end(), [](const LeafRef& a, const LeafRef& b) {
    return a.norm != b.norm ? a.norm < b.norm : a.position < b.position;
  });

  std::vector<char> removed(static_cast<std::size_t>(blocks_per_side * blocks_per_side), 0);
  double removed_sumsq = 0.0;
  std::int64_t removed_count = 0;
  for (const LeafRef& leaf : leaves) {
    if (!(std::sqrt(removed_sumsq + leaf.norm * leaf.norm) < delta)) break;
    removed_sumsq += leaf.norm * leaf.norm;
    removed[leaf.position] = 1;
    ++removed_count;
  }

  TruncationResult result{x, std::sqrt(removed_sumsq), removed_count};
  if (removed_count > 0) {
    result.matrix = QuadTreeMatrix::wrap(
        drop_leaves(x.root(), x.padded_dimension(), x.leaf_size(), 0, 0, blocks_per_side, removed),
        x.dimension(), x.leaf_size());
  }
  return result;
}

ControlledProduct spamm_with_error_control(const QuadTreeMatrix& a, const QuadTreeMatrix& b,
                                           double delta, const ToleranceGrid& grid) {
  if (!(delta > 0.0)) throw std::invalid_argument("spamm_with_error_control: delta must be positive");

  const auto cse_start = Clock::now();
  const ErrorBoundVector bounds = cse(a, b, grid);
  const double cse_seconds = seconds_since(cse_start);

  const auto k = select_index(bounds, grid, delta);
  const SpammTolerance tau{k ? grid.taus()[*k] : 0.0};
  const double bound = k ? bounds.bounds[*k] : 0.0;

  const auto spamm_start = Clock::now();
  QuadTreeMatrix product = spamm_multiply(a, b, tau);
  const double spamm_seconds = seconds_since(spamm_start);

  return ControlledProduct{std::move(product), tau, bound, cse_seconds, spamm_seconds};
}

}  // namespace spamm
