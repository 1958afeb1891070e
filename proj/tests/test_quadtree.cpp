#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spamm/multiply.hpp"
#include "spamm/quadtree.hpp"
#include "support.hpp"

using spamm::CoordinateEntry;
using spamm::DenseMatrix;
using spamm::QuadTreeMatrix;

namespace {

// Recomputes every cached norm from the raw leaf entries and checks the
// structural invariants: no inner node with four zero children, no all-zero
// leaf surviving.
double check_subtree(const QuadTreeMatrix::NodePtr& node, int size, int leaf) {
  if (!node) return 0.0;
  if (node->is_leaf()) {
    REQUIRE(size == leaf);
    double sumsq = 0.0;
    bool any = false;
    for (const double v : node->block) {
      sumsq += v * v;
      any = any || v != 0.0;
    }
    CHECK(any);  // all-zero leaves must collapse
    const double recomputed = std::sqrt(sumsq);
    CHECK(node->norm == doctest::Approx(recomputed).epsilon(1e-12));
    return recomputed;
  }
  bool all_null = true;
  double sumsq = 0.0;
  for (const auto& c : node->child) {
    all_null = all_null && !c;
    const double child_norm = check_subtree(c, size / 2, leaf);
    sumsq += child_norm * child_norm;
  }
  CHECK_FALSE(all_null);  // zero-normalization
  const double recomputed = std::sqrt(sumsq);
  CHECK(node->norm == doctest::Approx(recomputed).epsilon(1e-12));
  return recomputed;
}

void check_invariants(const QuadTreeMatrix& x) {
  check_subtree(x.root(), x.padded_dimension(), x.leaf_size());
  // padding invisible
  const DenseMatrix padded = x.to_dense_padded();
  for (int i = 0; i < padded.dimension(); ++i)
    for (int j = 0; j < padded.dimension(); ++j)
      if (i >= x.dimension() || j >= x.dimension()) CHECK(padded(i, j) == 0.0);
}

}  // namespace

TEST_CASE("empty coordinate list builds the zero matrix") {
  const auto x = QuadTreeMatrix::from_coordinates({}, 8, 4);
  CHECK(x.is_zero());
  CHECK(x.frobenius_norm() == 0.0);
  CHECK(x.nnz() == 0);
  CHECK(x.nnz_blocks() == 0);
  CHECK(x.trace() == 0.0);
}

TEST_CASE("identity has norm sqrt(n)") {
  const auto x = QuadTreeMatrix::identity(8, 4);
  CHECK(x.frobenius_norm() == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(x.trace() == 8.0);
  CHECK(x.nnz() == 8);
  check_invariants(x);
}

TEST_CASE("non power of two dimension pads and keeps padding-only quadrants zero") {
  std::vector<CoordinateEntry> diag;
  for (int i = 0; i < 6; ++i) diag.push_back({i, i, static_cast<double>(i + 1)});
  const auto x = QuadTreeMatrix::from_coordinates(diag, 6, 4);
  CHECK(x.padded_dimension() == 8);
  REQUIRE(x.root());
  REQUIRE_FALSE(x.root()->is_leaf());
  CHECK(x.root()->child[1] == nullptr);  // (0,1): padding and zeros only
  CHECK(x.root()->child[2] == nullptr);  // (1,0)
  CHECK(x.root()->child[3] != nullptr);  // holds (4,4), (5,5)

  DenseMatrix expect(6);
  for (const auto& e : diag) expect(e.row, e.col) = e.value;
  CHECK(testsupport::bitwise_equal(x.to_dense(), expect));
  check_invariants(x);
}

TEST_CASE("coordinate round trip is exact") {
  testsupport::Rng rng(11);
  std::vector<CoordinateEntry> entries;
  DenseMatrix expect(21);
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j)
      if (rng.uniform01() < 0.2) {
        const double v = rng.uniform(-2.0, 2.0);
        entries.push_back({i, j, v});
        expect(i, j) = v;
      }
  const auto x = QuadTreeMatrix::from_coordinates(entries, 21, 4);
  CHECK(testsupport::bitwise_equal(x.to_dense(), expect));
  CHECK(x.nnz() == static_cast<std::int64_t>(entries.size()));
  check_invariants(x);
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(QuadTreeMatrix::from_coordinates({{{8, 0, 1.0}}}, 8, 4), std::out_of_range);
  CHECK_THROWS_AS(QuadTreeMatrix::from_coordinates({{{0, -1, 1.0}}}, 8, 4), std::out_of_range);
  const std::vector<CoordinateEntry> dup{{1, 2, 1.0}, {1, 2, 3.0}};
  CHECK_THROWS_AS(QuadTreeMatrix::from_coordinates(dup, 8, 4), std::invalid_argument);
  CHECK_THROWS_AS(QuadTreeMatrix::zero(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(QuadTreeMatrix::zero(4, 0), std::invalid_argument);
}

TEST_CASE("add: zero is the identity and shares structure") {
  const auto a = QuadTreeMatrix::from_dense(testsupport::random_dense(12, 3, 0.4), 4);
  const auto z = QuadTreeMatrix::zero(12, 4);
  const auto sum = add(a, z);
  CHECK(sum.root() == a.root());  // structurally unchanged
  CHECK(add(z, a).root() == a.root());
}

TEST_CASE("add: exact cancellation collapses to zero") {
  const auto a = QuadTreeMatrix::from_dense(testsupport::random_dense(12, 5, 0.5), 4);
  const auto sum = add(a, a.scale(-1.0));
  CHECK(sum.is_zero());
  CHECK(sum.frobenius_norm() == 0.0);
}

TEST_CASE("add matches the dense sum entrywise") {
  const DenseMatrix da = testsupport::random_dense(13, 7, 0.3);
  const DenseMatrix db = testsupport::random_dense(13, 8, 0.3);
  const auto sum = add(QuadTreeMatrix::from_dense(da, 4), QuadTreeMatrix::from_dense(db, 4));
  DenseMatrix expect(13);
  for (int i = 0; i < 13; ++i)
    for (int j = 0; j < 13; ++j) expect(i, j) = da(i, j) + db(i, j);
  CHECK(testsupport::bitwise_equal(sum.to_dense(), expect));
  check_invariants(sum);
}

TEST_CASE("add rejects mismatched shapes") {
  const auto a = QuadTreeMatrix::zero(8, 4);
  CHECK_THROWS_AS(add(a, QuadTreeMatrix::zero(9, 4)), std::invalid_argument);
  CHECK_THROWS_AS(add(a, QuadTreeMatrix::zero(8, 2)), std::invalid_argument);
}

TEST_CASE("trace sums the diagonal") {
  testsupport::Rng rng(17);
  std::vector<CoordinateEntry> entries;
  double expect = 0.0;
  for (int i = 0; i < 19; ++i) {
    const double v = rng.uniform(-1.0, 1.0);
    entries.push_back({i, i, v});
    expect += v;
  }
  const auto x = QuadTreeMatrix::from_coordinates(entries, 19, 4);
  CHECK(x.trace() == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("scale behaves entrywise and collapses at zero") {
  const auto id = QuadTreeMatrix::identity(16, 4);
  const auto doubled = id.scale(2.0);
  CHECK(doubled.trace() == 32.0);
  CHECK(doubled.frobenius_norm() == doctest::Approx(2.0 * 4.0).epsilon(1e-15));
  CHECK(id.scale(0.0).is_zero());
  check_invariants(doubled);
}

TEST_CASE("nnz counts exact nonzeros, nnz_blocks counts leaves") {
  CHECK(QuadTreeMatrix::identity(16, 4).nnz() == 16);
  CHECK(QuadTreeMatrix::identity(16, 4).nnz_blocks() == 4);

  const DenseMatrix d = testsupport::random_dense(24, 23, 0.15);
  std::int64_t dense_count = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.data()[i] != 0.0) ++dense_count;
  CHECK(QuadTreeMatrix::from_dense(d, 8).nnz() == dense_count);
}

TEST_CASE("norm caches stay consistent through arithmetic chains") {
  const auto a = QuadTreeMatrix::from_dense(testsupport::random_dense(24, 31, 0.4), 4);
  const auto b = QuadTreeMatrix::from_dense(testsupport::random_dense(24, 32, 0.4), 4);
  const auto chained = add(multiply_exact(a, b).scale(-0.5), add(a, b.scale(2.0)));
  check_invariants(chained);
  CHECK(chained.frobenius_norm() ==
        doctest::Approx(testsupport::frobenius(chained.to_dense())).epsilon(1e-12));
}
