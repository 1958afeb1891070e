#pragma once
//
// Project     : spamm-ec
// Module      : dense_matrix
// Description : row-major dense square matrix used by conversions and oracles
//

#include <cstddef>
#include <vector>

namespace spamm {

/// Plain row-major square matrix. This is the reference representation:
/// conversions, file I/O staging and the dense oracles work on it, while the
/// production data structure is QuadTreeMatrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  explicit DenseMatrix(int dimension)
      : dimension_(dimension),
        values_(static_cast<std::size_t>(dimension) * static_cast<std::size_t>(dimension), 0.0) {}

  int dimension() const noexcept { return dimension_; }

  double& operator()(int row, int col) {
    return values_[static_cast<std::size_t>(row) * dimension_ + col];
  }
  double operator()(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * dimension_ + col];
  }

  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  std::size_t size() const noexcept { return values_.size(); }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.dimension_ == b.dimension_ && a.values_ == b.values_;
  }

 private:
  int dimension_ = 0;
  std::vector<double> values_;
};

}  // namespace spamm
