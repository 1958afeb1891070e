#pragma once
//
// Project     : spamm-ec
// Module      : error_control
// Description : CSE error-bound sweep, tolerance selection, block truncation
//

#include <cstdint>
#include <vector>

#include "spamm/multiply.hpp"
#include "spamm/quadtree.hpp"

namespace spamm {

/// Strictly decreasing list of positive SpAMM tolerance candidates
/// tau_1 > ... > tau_N.
class ToleranceGrid {
 public:
  /// taus[k] = start * ratio^k for k = 0..count-1. The default sweep spans
  /// 1 down to roughly 1e-16.
  static ToleranceGrid geometric(double start = 1.0, double ratio = 0.9, int count = 350);

  explicit ToleranceGrid(std::vector<double> taus);

  const std::vector<double>& taus() const noexcept { return taus_; }
  std::size_t size() const noexcept { return taus_.size(); }

 private:
  std::vector<double> taus_;
};

/// Upper bounds on the SpAMM product error, one per grid candidate, aligned
/// with ToleranceGrid::taus(). Bounds are nondecreasing in tau.
struct ErrorBoundVector {
  std::vector<double> bounds;
};

/// One recursive pass computing, for every tau in the grid, an upper bound on
/// ||spamm_multiply(A, B, tau) - A*B||_F. Skipped leaf products register
/// ||A_leaf||_F * ||B_leaf||_F; inner levels combine quadrant contributions as
/// sqrt(sum over output quadrants of (E_0 + E_1)^2), elementwise over the
/// candidate vector. Throws on dimension mismatch or an empty grid.
ErrorBoundVector cse(const QuadTreeMatrix& a, const QuadTreeMatrix& b, const ToleranceGrid& grid);

/// Largest tau whose bound is strictly below delta; tau = 0 (exact
/// multiplication) when no candidate qualifies.
SpammTolerance select_tolerance(const ErrorBoundVector& bounds, const ToleranceGrid& grid,
                                double delta);

struct TruncationResult {
  QuadTreeMatrix matrix;
  /// Frobenius norm of the removed part, sqrt of the sum of removed block
  /// norms squared; strictly below the requested delta.
  double removed_norm_bound = 0.0;
  std::int64_t removed_block_count = 0;
};

/// Remove whole leaf blocks greedily in ascending block-norm order (ties
/// broken by block position, row-major) while the accumulated removed norm
/// stays strictly below delta. delta = 0 removes nothing.
TruncationResult truncate(const QuadTreeMatrix& x, double delta);

struct ControlledProduct {
  QuadTreeMatrix matrix;
  SpammTolerance chosen_tau;
  /// CSE bound associated with chosen_tau (0 when the exact fallback ran).
  double bound = 0.0;
  double cse_seconds = 0.0;
  double spamm_seconds = 0.0;
};

/// cse + select_tolerance + spamm_multiply. Guarantees
/// ||result - A*B||_F < delta, degrading to exact multiplication when no grid
/// candidate meets the budget. Requires delta > 0.
ControlledProduct spamm_with_error_control(const QuadTreeMatrix& a, const QuadTreeMatrix& b,
                                           double delta, const ToleranceGrid& grid);

}  // namespace spamm
