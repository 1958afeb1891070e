#pragma once
//
// Project     : spamm-ec
// Module      : multiply
// Description : exact quadtree product and SpAMM norm-product skipping
//

#include "spamm/quadtree.hpp"

namespace spamm {

/// SpAMM skip threshold: any subtree product with ||A||_F * ||B||_F < tau is
/// replaced by zero, tested at every level of the recursion including the
/// root and the leaves. tau = 0 never skips.
struct SpammTolerance {
  double tau = 0.0;
};

/// C = A * B with the fixed summation order C_ij = (A_i0 * B_0j) + (A_i1 * B_1j)
/// and zero branches skipped. Bitwise identical to spamm_multiply with tau = 0.
/// Throws std::invalid_argument on dimension or leaf size mismatch.
QuadTreeMatrix multiply_exact(const QuadTreeMatrix& a, const QuadTreeMatrix& b);

/// Sparse approximate product: subtree products whose cached norm product
/// falls strictly below tau return zero; surviving branches recurse with the
/// same summation order as multiply_exact. Repeated calls on identical inputs
/// give bitwise identical results regardless of the thread count.
QuadTreeMatrix spamm_multiply(const QuadTreeMatrix& a, const QuadTreeMatrix& b,
                              SpammTolerance tolerance);

}  // namespace spamm
