#include "spamm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace spamm::oracle {

namespace {

// mt19937_64 bits mapped to [0, 1) explicitly; std::uniform_real_distribution
// is not bit-specified across standard library implementations.
class Uniform01 {
 public:
  explicit Uniform01(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double next_signed() { return 2.0 * next() - 1.0; }  // [-1, 1)

 private:
  std::mt19937_64 engine_;
};

double off_diagonal_row_sum(const DenseMatrix& a, int i) {
  double sum = 0.0;
  for (int j = 0; j < a.dimension(); ++j)
    if (j != i) sum += std::abs(a(i, j));
  return sum;
}

}  // namespace

DenseMatrix dense_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("dense_multiply: dimension mismatch");
  const int n = a.dimension();
  DenseMatrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double dense_frobenius(const DenseMatrix& a) {
  double sumsq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sumsq += a.data()[i] * a.data()[i];
  return std::sqrt(sumsq);
}

EigenDecomposition jacobi_eigendecomposition(DenseMatrix a, double threshold, int max_sweeps) {
  const int n = a.dimension();
  DenseMatrix v(n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  const double total_norm = dense_frobenius(a);

  auto off_diagonal_norm = [&] {
    double sumsq = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) sumsq += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(sumsq);
  };

  int sweep = 0;
  bool converged = off_diagonal_norm() <= threshold * total_norm;
  while (!converged && sweep < max_sweeps) {
    ++sweep;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = ((theta >= 0.0) ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(p, k) = a(k, p);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_norm() <= threshold * total_norm;
  }
  if (!converged) {
    throw std::runtime_error("jacobi_eigendecomposition: no convergence within " +
                             std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });

  EigenDecomposition result;
  result.eigenvalues.resize(n);
  result.eigenvectors = DenseMatrix(n);
  for (int k = 0; k < n; ++k) {
    result.eigenvalues[k] = a(order[k], order[k]);
    for (int i = 0; i < n; ++i) result.eigenvectors(i, k) = v(i, order[k]);
  }
  result.sweeps = sweep;
  return result;
}

DenseMatrix density_matrix_oracle(const DenseMatrix& fock, int occupation) {
  const int n = fock.dimension();
  if (occupation < 0 || occupation > n)
    throw std::invalid_argument("density_matrix_oracle: occupation outside [0, n]");
  double max_abs = 0.0;
  for (std::size_t i = 0; i < fock.size(); ++i) max_abs = std::max(max_abs, std::abs(fock.data()[i]));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(fock(i, j) - fock(j, i)) > 1e-10 * std::max(1.0, max_abs))
        throw std::invalid_argument("density_matrix_oracle: matrix is not symmetric");

  const EigenDecomposition eig = jacobi_eigendecomposition(fock);
  DenseMatrix d(n);
  for (int k = 0; k < occupation; ++k) {
    for (int i = 0; i < n; ++i) {
      const double vik = eig.eigenvectors(i, k);
      if (vik == 0.0) continue;
      for (int j = 0; j < n; ++j) d(i, j) += vik * eig.eigenvectors(j, k);
    }
  }
  return d;
}

DenseMatrix generate_decay_matrix(const DecayModelSpec& spec) {
  if (spec.dimension <= 0) throw std::invalid_argument("generate_decay_matrix: dimension must be positive");
  if (!(spec.alpha > 0.0)) throw std::invalid_argument("generate_decay_matrix: alpha must be positive");
  if (!(spec.scale >= 0.0)) throw std::invalid_argument("generate_decay_matrix: scale must be nonnegative");
  if (!(spec.spectral_high > spec.spectral_low))
    throw std::invalid_argument("generate_decay_matrix: empty spectral target");

  const int n = spec.dimension;
  DenseMatrix a(n);
  Uniform01 rng(spec.seed);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double u = rng.next_signed();
      const double envelope = spec.scale * std::exp(-spec.alpha * static_cast<double>(j - i));
      const double value = u * envelope;
      a(i, j) = value;
      a(j, i) = value;
    }
  }

  const double width = spec.spectral_high - spec.spectral_low;
  for (int i = 0; i < n; ++i) {
    const double radius = off_diagonal_row_sum(a, i);
    if (2.0 * radius > width) {
      throw std::domain_error(
          "generate_decay_matrix: infeasible spectral target (row " + std::to_string(i) +
          " has Gershgorin radius " + std::to_string(radius) + ", interval width " +
          std::to_string(width) + ")");
    }
    a(i, i) = spec.spectral_low + radius + rng.next() * (width - 2.0 * radius);
  }
  return a;
}

std::pair<double, double> gershgorin_bounds(const DenseMatrix& a) {
  double low = std::numeric_limits<double>::infinity();
  double high = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.dimension(); ++i) {
    const double radius = off_diagonal_row_sum(a, i);
    low = std::min(low, a(i, i) - radius);
    high = std::max(high, a(i, i) + radius);
  }
  return {low, high};
}

}  // namespace spamm::oracle
