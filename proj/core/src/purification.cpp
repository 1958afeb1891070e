#include "spamm/purification.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "spamm/multiply.hpp"

namespace spamm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

QuadTreeMatrix apply_polynomial(Sp2Polynomial poly, const QuadTreeMatrix& x,
                                const QuadTreeMatrix& x_squared) {
  if (poly == Sp2Polynomial::square) return x_squared;
  return add(x.scale(2.0), x_squared.scale(-1.0));
}

double frobenius_distance(const QuadTreeMatrix& a, const QuadTreeMatrix& b) {
  return add(a, b.scale(-1.0)).frobenius_norm();
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::truncmul: return "truncmul";
    case Variant::spamm: return "spamm";
    case Variant::hybrid: return "hybrid";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "truncmul") return Variant::truncmul;
  if (name == "spamm") return Variant::spamm;
  if (name == "hybrid") return Variant::hybrid;
  return std::nullopt;
}

QuadTreeMatrix initial_transform(const QuadTreeMatrix& fock, const SpectralTransform& t) {
  if (!(t.lambda_max > t.lambda_min)) {
    throw std::invalid_argument("initial_transform: lambda_max must exceed lambda_min");
  }
  const QuadTreeMatrix shifted =
      add(QuadTreeMatrix::identity(fock.dimension(), fock.leaf_size()).scale(t.lambda_max),
          fock.scale(-1.0));
  return shifted.scale(1.0 / (t.lambda_max - t.lambda_min));
}

Sp2Choice sp2_step(const QuadTreeMatrix& x, int occupation) {
  if (x.trace() > static_cast<double>(occupation)) {
    return {Sp2Polynomial::square, "x^2"};
  }
  return {Sp2Polynomial::trace_correcting, "2x - x^2"};
}

ErrorBudget ErrorBudget::geometric(double epsilon, int iterations, double ratio) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("budget: epsilon must be positive");
  if (iterations < 1) throw std::invalid_argument("budget: iteration count must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("budget: ratio must be in (0, 1)");

  ErrorBudget budget;
  budget.initial_delta = epsilon / 2.0;
  budget.deltas.resize(static_cast<std::size_t>(iterations));
  const double half = epsilon / 2.0;
  const double geometric_mass = 1.0 - std::pow(ratio, iterations);
  double term = (1.0 - ratio) / geometric_mass;
  for (int i = 0; i < iterations; ++i) {
    budget.deltas[i] = std::max(half * term, std::numeric_limits<double>::min());
    term *= ratio;
  }
  return budget;
}

double ErrorBudget::total() const {
  double sum = initial_delta;
  for (const double d : deltas) sum += d;
  return sum;
}

PurificationResult purify(const QuadTreeMatrix& x0, const PurificationConfig& config) {
  if (config.occupation <= 0 || config.occupation >= x0.dimension()) {
    throw std::invalid_argument("purify: occupation must lie strictly between 0 and the dimension");
  }
  if (config.max_iterations < 1) throw std::invalid_argument("purify: max_iterations must be positive");
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("purify: epsilon must be positive");

  const double eta =
      config.idempotency_threshold > 0.0 ? config.idempotency_threshold : config.epsilon / 10.0;
  const ErrorBudget budget = config.budget
                                 ? config.budget(config.epsilon, config.max_iterations)
                                 : ErrorBudget::geometric(config.epsilon, config.max_iterations);
  if (static_cast<int>(budget.deltas.size()) < config.max_iterations) {
    throw std::invalid_argument("purify: budget provides fewer deltas than max_iterations");
  }

  PurificationResult result{x0, {}, false, 0};
  QuadTreeMatrix x = x0;

  if (config.variant != Variant::spamm && budget.initial_delta > 0.0) {
    RunRecord rec;
    rec.variant = std::string(to_string(config.variant));
    rec.iteration = 0;
    rec.tolerance = budget.initial_delta;
    const auto start = Clock::now();
    TruncationResult tr = truncate(x0, budget.initial_delta);
    rec.t_trunc = seconds_since(start);
    rec.nnz_in = x0.nnz();
    rec.nnz_mid = rec.nnz_in;
    x = std::move(tr.matrix);
    rec.nnz_out = x.nnz();
    rec.nnz_blocks_out = x.nnz_blocks();
    rec.realized_error = tr.removed_norm_bound;
    rec.status = "ok";
    rec.trace = x.trace();
    result.log.push_back(std::move(rec));
  }

  for (int i = 1; i <= config.max_iterations; ++i) {
    const double delta = budget.deltas[static_cast<std::size_t>(i - 1)];
    const bool exact_mode = !(delta > 0.0);
    const QuadTreeMatrix prev = x;
    const Sp2Choice choice = sp2_step(prev, config.occupation);

    RunRecord rec;
    rec.variant = std::string(to_string(config.variant));
    rec.iteration = i;
    rec.tolerance = delta;
    rec.nnz_in = prev.nnz();

    QuadTreeMatrix squared = QuadTreeMatrix::zero(prev.dimension(), prev.leaf_size());
    if (config.variant == Variant::truncmul || exact_mode) {
      const auto start = Clock::now();
      squared = multiply_exact(prev, prev);
      rec.t_mul = seconds_since(start);
    } else {
      const double multiply_delta = config.variant == Variant::hybrid ? delta / 2.0 : delta;
      ControlledProduct cp = spamm_with_error_control(prev, prev, multiply_delta, config.grid);
      squared = std::move(cp.matrix);
      rec.chosen_tau = cp.chosen_tau.tau;
      rec.t_cse = cp.cse_seconds;
      rec.t_spamm = cp.spamm_seconds;
    }

    // Idempotency proxy: trace(X) - trace(X^2) vanishes as the spectrum
    // collapses onto {0, 1}.
    if (std::abs(prev.trace() - squared.trace()) < eta) {
      rec.nnz_mid = squared.nnz();
      rec.nnz_out = prev.nnz();
      rec.nnz_blocks_out = prev.nnz_blocks();
      rec.realized_error = 0.0;
      rec.status = "converged";
      rec.trace = prev.trace();
      result.log.push_back(std::move(rec));
      result.density = prev;
      result.converged = true;
      result.iterations = i - 1;
      return result;
    }

    QuadTreeMatrix iterate = apply_polynomial(choice.polynomial, prev, squared);
    rec.nnz_mid = iterate.nnz();

    if (!exact_mode && config.variant != Variant::spamm) {
      const double truncation_delta =
          config.variant == Variant::hybrid ? delta / 2.0 : delta;
      const auto start = Clock::now();
      TruncationResult tr = truncate(iterate, truncation_delta);
      rec.t_trunc = seconds_since(start);
      iterate = std::move(tr.matrix);
    }

    rec.nnz_out = iterate.nnz();
    rec.nnz_blocks_out = iterate.nnz_blocks();

    // Measurement only: the exact polynomial value of the previous iterate.
    const QuadTreeMatrix exact_squared = multiply_exact(prev, prev);
    const QuadTreeMatrix exact_step = apply_polynomial(choice.polynomial, prev, exact_squared);
    rec.realized_error = frobenius_distance(iterate, exact_step);
    rec.status = (rec.realized_error < delta || (exact_mode && rec.realized_error == 0.0))
                     ? "ok"
                     : "violation";
    rec.trace = iterate.trace();
    result.log.push_back(std::move(rec));

    x = std::move(iterate);
    result.iterations = i;
  }

  result.density = x;
  result.converged = false;
  return result;
}

PurificationResult purify_fock(const QuadTreeMatrix& fock, const SpectralTransform& t,
                               const PurificationConfig& config) {
  return purify(initial_transform(fock, t), config);
}

}  // namespace spamm
