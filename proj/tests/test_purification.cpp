#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spamm/multiply.hpp"
#include "spamm/oracle.hpp"
#include "spamm/purification.hpp"
#include "support.hpp"

using spamm::CoordinateEntry;
using spamm::DenseMatrix;
using spamm::ErrorBudget;
using spamm::PurificationConfig;
using spamm::QuadTreeMatrix;
using spamm::Sp2Polynomial;
using spamm::Variant;

namespace {

QuadTreeMatrix diagonal(const std::vector<double>& values, int leaf) {
  std::vector<CoordinateEntry> entries;
  for (std::size_t i = 0; i < values.size(); ++i)
    entries.push_back({static_cast<int>(i), static_cast<int>(i), values[i]});
  return QuadTreeMatrix::from_coordinates(entries, static_cast<int>(values.size()), leaf);
}

const std::vector<Variant> kAllVariants{Variant::truncmul, Variant::spamm, Variant::hybrid};

}  // namespace

TEST_CASE("initial transform maps the spectrum into [0, 1] reversed") {
  const auto id = QuadTreeMatrix::identity(8, 4);

  SUBCASE("F = lambda_min I maps to the identity") {
    const auto x0 = initial_transform(id.scale(0.0), {0.0, 2.0});
    CHECK(testsupport::bitwise_equal(x0.to_dense(), id.to_dense()));
  }
  SUBCASE("F = lambda_max I maps to zero") {
    const auto x0 = initial_transform(id.scale(2.0), {0.0, 2.0});
    CHECK(x0.is_zero());
  }
  SUBCASE("diagonal example") {
    const auto f = diagonal({-1.0, 0.0, 3.0}, 4);
    const auto x0 = initial_transform(f, {-1.0, 3.0});
    DenseMatrix expect(3);
    expect(0, 0) = 1.0;
    expect(1, 1) = 0.75;
    CHECK(testsupport::bitwise_equal(x0.to_dense(), expect));
  }
  SUBCASE("degenerate bounds rejected") {
    CHECK_THROWS_AS(initial_transform(id, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(initial_transform(id, {2.0, 1.0}), std::invalid_argument);
  }
}

TEST_CASE("sp2 selection is steered by the trace") {
  const auto above = diagonal({0.9, 0.3}, 2);  // trace 1.2 > 1
  CHECK(sp2_step(above, 1).polynomial == Sp2Polynomial::square);
  const auto squared = multiply_exact(above, above);
  CHECK(squared.to_dense()(0, 0) == doctest::Approx(0.81));
  CHECK(squared.to_dense()(1, 1) == doctest::Approx(0.09));

  const auto tie = diagonal({1.5, 0.5}, 2);  // trace exactly 2
  CHECK(sp2_step(tie, 2).polynomial == Sp2Polynomial::trace_correcting);

  // Both polynomials fix an idempotent matrix.
  const auto projector = diagonal({1.0, 1.0, 0.0, 0.0}, 4);
  const auto p2 = multiply_exact(projector, projector);
  CHECK(testsupport::bitwise_equal(p2.to_dense(), projector.to_dense()));
  const auto corrected = add(projector.scale(2.0), p2.scale(-1.0));
  CHECK(testsupport::bitwise_equal(corrected.to_dense(), projector.to_dense()));
}

TEST_CASE("geometric budget sums to epsilon and tightens over iterations") {
  const ErrorBudget budget = ErrorBudget::geometric(1e-5, 40);
  CHECK(budget.initial_delta == 5e-6);
  double sum = 0.0;
  for (std::size_t i = 0; i < budget.deltas.size(); ++i) {
    CHECK(budget.deltas[i] > 0.0);
    if (i > 0) CHECK(budget.deltas[i] < budget.deltas[i - 1]);
    sum += budget.deltas[i];
  }
  CHECK(sum == doctest::Approx(5e-6).epsilon(1e-12));
  CHECK(budget.total() == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK_THROWS_AS(ErrorBudget::geometric(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(ErrorBudget::geometric(1e-5, 0), std::invalid_argument);
}

TEST_CASE("an idempotent start with matching trace converges at the first check") {
  const auto projector = diagonal({1.0, 1.0, 0.0, 0.0}, 4);
  for (const Variant variant : kAllVariants) {
    PurificationConfig config;
    config.variant = variant;
    config.occupation = 2;
    config.epsilon = 1e-6;
    const auto result = purify(projector, config);
    CHECK(result.converged);
    CHECK(result.iterations == 0);
    CHECK(testsupport::bitwise_equal(result.density.to_dense(), projector.to_dense()));
    REQUIRE_FALSE(result.log.empty());
    CHECK(result.log.back().status == "converged");
  }
}

TEST_CASE("diagonal start converges to the closed-form projector") {
  const auto x0 = diagonal({0.9, 0.8, 0.2, 0.1}, 4);
  DenseMatrix expect(4);
  expect(0, 0) = 1.0;
  expect(1, 1) = 1.0;
  for (const Variant variant : kAllVariants) {
    PurificationConfig config;
    config.variant = variant;
    config.occupation = 2;
    config.epsilon = 1e-6;
    const auto result = purify(x0, config);
    CHECK(result.converged);
    CHECK(testsupport::diff_frobenius(result.density.to_dense(), expect) < 1e-6);
    for (const auto& rec : result.log) {
      if (rec.status == "converged") continue;
      CHECK(rec.status == "ok");
      CHECK(rec.realized_error < rec.tolerance);  // per-iteration contract
    }
  }
}

TEST_CASE("zero budget forces exact arithmetic and variant equivalence") {
  spamm::oracle::DecayModelSpec spec;
  spec.dimension = 48;
  spec.alpha = 0.6;
  spec.seed = 5;
  const DenseMatrix f = spamm::oracle::generate_decay_matrix(spec);
  const auto x0 = initial_transform(QuadTreeMatrix::from_dense(f, 16), {0.0, 2.0});

  const auto zero_budget = [](double, int n) {
    ErrorBudget b;
    b.initial_delta = 0.0;
    b.deltas.assign(static_cast<std::size_t>(n), 0.0);
    return b;
  };

  std::vector<DenseMatrix> finals;
  std::vector<int> iteration_counts;
  std::vector<std::vector<double>> traces;
  for (const Variant variant : kAllVariants) {
    PurificationConfig config;
    config.variant = variant;
    config.occupation = 12;
    config.epsilon = 1e-9;
    config.budget = zero_budget;
    const auto result = purify(x0, config);
    CHECK(result.converged);
    finals.push_back(result.density.to_dense());
    iteration_counts.push_back(result.iterations);
    std::vector<double> t;
    for (const auto& rec : result.log) t.push_back(rec.trace);
    traces.push_back(std::move(t));
  }
  CHECK(iteration_counts[1] == iteration_counts[0]);
  CHECK(iteration_counts[2] == iteration_counts[0]);
  CHECK(testsupport::bitwise_equal(finals[1], finals[0]));
  CHECK(testsupport::bitwise_equal(finals[2], finals[0]));
  CHECK(traces[1] == traces[0]);
  CHECK(traces[2] == traces[0]);
}

TEST_CASE("decay-model purification tracks the eigensolver oracle") {
  spamm::oracle::DecayModelSpec spec;
  spec.dimension = 128;
  spec.alpha = 0.55;
  spec.seed = 9;  // comfortable spectral gap at occupation 32
  const DenseMatrix f = spamm::oracle::generate_decay_matrix(spec);
  const DenseMatrix reference = spamm::oracle::density_matrix_oracle(f, 32);
  const auto x0 = initial_transform(QuadTreeMatrix::from_dense(f, 32), {0.0, 2.0});

  for (const Variant variant : kAllVariants) {
    PurificationConfig config;
    config.variant = variant;
    config.occupation = 32;
    config.epsilon = 1e-5;
    const auto result = purify(x0, config);
    CHECK(result.converged);
    CHECK(testsupport::diff_frobenius(result.density.to_dense(), reference) < 1e-5);
    CHECK(std::abs(result.density.trace() - 32.0) < 1e-3);
    for (const auto& rec : result.log)
      if (rec.status != "converged") CHECK(rec.realized_error < rec.tolerance);
  }
}

TEST_CASE("hitting the iteration cap reports non-convergence") {
  spamm::oracle::DecayModelSpec spec;
  spec.dimension = 64;
  spec.alpha = 0.5;
  spec.seed = 21;
  const DenseMatrix f = spamm::oracle::generate_decay_matrix(spec);
  const auto x0 = initial_transform(QuadTreeMatrix::from_dense(f, 32), {0.0, 2.0});
  PurificationConfig config;
  config.variant = Variant::hybrid;
  config.occupation = 16;
  config.epsilon = 1e-6;
  config.max_iterations = 2;
  const auto result = purify(x0, config);
  CHECK_FALSE(result.converged);
  CHECK(result.iterations == 2);
  CHECK(result.log.size() >= 2);  // every attempted iteration is logged
}

TEST_CASE("configuration is validated") {
  const auto x0 = diagonal({1.0, 0.0}, 2);
  PurificationConfig config;
  config.occupation = 0;
  CHECK_THROWS_AS(purify(x0, config), std::invalid_argument);
  config.occupation = 2;  // == dimension
  CHECK_THROWS_AS(purify(x0, config), std::invalid_argument);
  config.occupation = 1;
  config.epsilon = 0.0;
  CHECK_THROWS_AS(purify(x0, config), std::invalid_argument);
  config.epsilon = 1e-6;
  config.max_iterations = 0;
  CHECK_THROWS_AS(purify(x0, config), std::invalid_argument);
}
