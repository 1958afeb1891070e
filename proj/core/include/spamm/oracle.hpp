#pragma once
//
// Project     : spamm-ec
// Module      : oracle
// Description : dense reference implementations and test-instance generators
//
// Everything here is deliberately independent of the quadtree code paths it
// is used to validate: plain triple loops and a hand-rolled cyclic Jacobi
// eigensolver, no shared kernels.
//

#include <cstdint>
#include <utility>
#include <vector>

#include "spamm/dense_matrix.hpp"

namespace spamm::oracle {

/// Textbook C = A * B, fixed i-k-j loop order.
DenseMatrix dense_multiply(const DenseMatrix& a, const DenseMatrix& b);

/// Frobenius norm by plain accumulation over rows.
double dense_frobenius(const DenseMatrix& a);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix eigenvectors;         // eigenvector k in column k
  int sweeps = 0;
};

/// Cyclic-by-rows Jacobi for a symmetric matrix. Converges when the
/// off-diagonal Frobenius norm drops below threshold * ||A||_F; throws
/// std::runtime_error when max_sweeps is exhausted first.
EigenDecomposition jacobi_eigendecomposition(DenseMatrix a, double threshold = 1e-14,
                                             int max_sweeps = 100);

/// Spectral projector onto the `occupation` lowest eigenstates of a symmetric
/// matrix: D = V diag(1, .., 1, 0, .., 0) V^T.
DenseMatrix density_matrix_oracle(const DenseMatrix& fock, int occupation);

/// Parameters for the synthetic test matrices: symmetric, entries decaying
/// exponentially away from the diagonal, eigenvalues guaranteed inside the
/// requested interval.
struct DecayModelSpec {
  int dimension = 0;
  double alpha = 0.5;          // decay rate, |a_ij| <= scale * exp(-alpha * |i - j|) off-diagonal
  double scale = 0.3;          // off-diagonal magnitude scale
  double spectral_low = 0.0;   // target interval for the eigenvalues
  double spectral_high = 2.0;
  std::uint64_t seed = 0;
};

/// Deterministic in the seed. Off-diagonal entries are uniform inside the
/// exponential envelope; diagonal entries are placed so every Gershgorin disc
/// lies inside [spectral_low, spectral_high], which guarantees the spectral
/// target a priori. Throws std::domain_error when the interval is too narrow
/// for the drawn off-diagonal mass.
DenseMatrix generate_decay_matrix(const DecayModelSpec& spec);

/// (min_i(a_ii - r_i), max_i(a_ii + r_i)) with r_i the off-diagonal row sum;
/// encloses the spectrum of a symmetric matrix.
std::pair<double, double> gershgorin_bounds(const DenseMatrix& a);

}  // namespace spamm::oracle
