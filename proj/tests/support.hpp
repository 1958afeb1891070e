#pragma once
//
// Shared test helpers: seeded generators, dense comparisons, and independent
// dense-recursion reference implementations of the sweep and the skipping
// product. The references never touch the quadtree code paths they check.
//

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

#include "spamm/dense_matrix.hpp"
#include "spamm/quadtree.hpp"

namespace testsupport {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

inline spamm::DenseMatrix random_dense(int n, std::uint64_t seed, double fill = 1.0) {
  Rng rng(seed);
  spamm::DenseMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (fill >= 1.0 || rng.uniform01() < fill) a(i, j) = rng.uniform(-1.0, 1.0);
  return a;
}

inline bool bitwise_equal(const spamm::DenseMatrix& a, const spamm::DenseMatrix& b) {
  return a.dimension() == b.dimension() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

inline double frobenius(const spamm::DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
  return std::sqrt(s);
}

inline double diff_frobenius(const spamm::DenseMatrix& a, const spamm::DenseMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline int pad_dimension(int n, int leaf) {
  int padded = leaf;
  while (padded < n) padded *= 2;
  return padded;
}

inline spamm::DenseMatrix pad_dense(const spamm::DenseMatrix& a, int leaf) {
  const int padded = pad_dimension(a.dimension(), leaf);
  spamm::DenseMatrix out(padded);
  for (int i = 0; i < a.dimension(); ++i)
    for (int j = 0; j < a.dimension(); ++j) out(i, j) = a(i, j);
  return out;
}

inline double region_norm(const spamm::DenseMatrix& a, int row0, int col0, int size) {
  double s = 0.0;
  for (int i = row0; i < row0 + size; ++i)
    for (int j = col0; j < col0 + size; ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

namespace detail {

inline std::vector<double> reference_cse_node(const spamm::DenseMatrix& a, int ar, int ac,
                                              const spamm::DenseMatrix& b, int br, int bc,
                                              int size, int leaf,
                                              const std::vector<double>& taus) {
  std::vector<double> errors(taus.size(), 0.0);
  const double p = region_norm(a, ar, ac, size) * region_norm(b, br, bc, size);
  if (p == 0.0) return errors;
  if (size == leaf) {
    for (std::size_t k = 0; k < taus.size(); ++k)
      if (p < taus[k]) errors[k] = p;
    return errors;
  }
  const int half = size / 2;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      std::vector<double> e1 = reference_cse_node(a, ar + i * half, ac, b, br, bc + j * half,
                                                  half, leaf, taus);
      std::vector<double> e2 = reference_cse_node(a, ar + i * half, ac + half, b, br + half,
                                                  bc + j * half, half, leaf, taus);
      for (std::size_t k = 0; k < errors.size(); ++k) {
        const double sum = e1[k] + e2[k];
        errors[k] += sum * sum;
      }
    }
  }
  for (double& e : errors) e = std::sqrt(e);
  return errors;
}

inline void reference_spamm_node(const spamm::DenseMatrix& a, int ar, int ac,
                                 const spamm::DenseMatrix& b, int br, int bc, int size, int leaf,
                                 double tau, spamm::DenseMatrix& out, int orow, int ocol) {
  const double na = region_norm(a, ar, ac, size);
  const double nb = region_norm(b, br, bc, size);
  if (na == 0.0 || nb == 0.0) return;  // identically zero branch
  if (na * nb < tau) return;           // the skip decision under test
  if (size == leaf) {
    for (int i = 0; i < leaf; ++i)
      for (int j = 0; j < leaf; ++j) {
        double sum = 0.0;
        for (int k = 0; k < leaf; ++k) sum += a(ar + i, ac + k) * b(br + k, bc + j);
        out(orow + i, ocol + j) += sum;
      }
    return;
  }
  const int half = size / 2;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      reference_spamm_node(a, ar + i * half, ac, b, br, bc + j * half, half, leaf, tau, out,
                           orow + i * half, ocol + j * half);
      reference_spamm_node(a, ar + i * half, ac + half, b, br + half, bc + j * half, half, leaf,
                           tau, out, orow + i * half, ocol + j * half);
    }
}

}  // namespace detail

/// Independent dense recursion mirroring the error sweep; norms recomputed
/// from scratch per region.
inline std::vector<double> reference_cse(const spamm::DenseMatrix& a, const spamm::DenseMatrix& b,
                                         int leaf, const std::vector<double>& taus) {
  const spamm::DenseMatrix pa = pad_dense(a, leaf);
  const spamm::DenseMatrix pb = pad_dense(b, leaf);
  return detail::reference_cse_node(pa, 0, 0, pb, 0, 0, pa.dimension(), leaf, taus);
}

/// Independent dense recursion re-deriving every skip decision of the
/// approximate product from region norms. Returns the padded product.
inline spamm::DenseMatrix reference_spamm(const spamm::DenseMatrix& a, const spamm::DenseMatrix& b,
                                          int leaf, double tau) {
  const spamm::DenseMatrix pa = pad_dense(a, leaf);
  const spamm::DenseMatrix pb = pad_dense(b, leaf);
  spamm::DenseMatrix out(pa.dimension());
  detail::reference_spamm_node(pa, 0, 0, pb, 0, 0, pa.dimension(), leaf, tau, out, 0, 0);
  return out;
}

inline spamm::DenseMatrix unpad(const spamm::DenseMatrix& a, int n) {
  spamm::DenseMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = a(i, j);
  return out;
}

}  // namespace testsupport
