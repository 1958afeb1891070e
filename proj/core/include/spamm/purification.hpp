#pragma once
//
// Project     : spamm-ec
// Module      : purification
// Description : SP2 density-matrix purification drivers with per-iteration
//               error budgets (multiply-and-truncate, approximate multiply,
//               and the hybrid of the two)
//

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "spamm/error_control.hpp"
#include "spamm/quadtree.hpp"
#include "spamm/run_record.hpp"

namespace spamm {

enum class Variant {
  truncmul,  // exact multiply, then truncate with delta_i
  spamm,     // error-controlled approximate multiply with delta_i, no truncation
  hybrid,    // approximate multiply with delta_i/2, then truncate with delta_i/2
};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// Bounds on the spectrum of the input matrix, e.g. from Gershgorin discs.
struct SpectralTransform {
  double lambda_min = 0.0;
  double lambda_max = 1.0;
};

/// X_0 = (lambda_max * I - F) / (lambda_max - lambda_min): maps the spectrum
/// into [0, 1] with the order reversed, so occupied (low) eigenvalues land
/// near 1. Throws when lambda_max <= lambda_min.
QuadTreeMatrix initial_transform(const QuadTreeMatrix& fock, const SpectralTransform& t);

enum class Sp2Polynomial {
  square,            // f(x) = x^2, pushes the trace down
  trace_correcting,  // f(x) = 2x - x^2, pushes the trace up
};

struct Sp2Choice {
  Sp2Polynomial polynomial;
  std::string_view description;
};

/// Trace-steered SP2 selection: x^2 when trace(X) > occupation, else 2x - x^2.
/// Either way the driver evaluates the choice with a single matrix square.
Sp2Choice sp2_step(const QuadTreeMatrix& x, int occupation);

/// Per-iteration error tolerances. The defaults keep
/// initial_delta + sum(deltas) <= epsilon.
struct ErrorBudget {
  double initial_delta = 0.0;  // delta_0, spent truncating X_0 (ignored by the spamm variant)
  std::vector<double> deltas;  // delta_1 .. delta_n

  /// delta_0 = epsilon/2 and delta_i = (epsilon/2) * (1-ratio) * ratio^(i-1),
  /// normalized so the iteration deltas sum to epsilon/2; later iterations get
  /// tighter tolerances.
  static ErrorBudget geometric(double epsilon, int iterations, double ratio = 0.5);

  double total() const;
};

using BudgetPolicy = std::function<ErrorBudget(double epsilon, int iterations)>;

struct PurificationConfig {
  Variant variant = Variant::hybrid;
  int occupation = 0;
  int max_iterations = 100;
  double epsilon = 1e-5;
  ToleranceGrid grid = ToleranceGrid::geometric();
  /// Stop once |trace(X) - trace(X^2)| falls below this; 0 means epsilon / 10.
  double idempotency_threshold = 0.0;
  /// Replaceable delta_i schedule; null means ErrorBudget::geometric. Budgets
  /// with all deltas equal to zero force exact arithmetic (no skips, no
  /// truncation) in every variant.
  BudgetPolicy budget;
};

struct PurificationResult {
  QuadTreeMatrix density;
  std::vector<RunRecord> log;
  bool converged = false;
  int iterations = 0;  // completed polynomial applications
};

/// Run the configured purification variant from a spectrum-mapped start
/// matrix. Per iteration the realized error ||X_i - f_i(X_{i-1})||_F stays
/// strictly below delta_i; every iteration is logged, and non-convergence at
/// max_iterations is reported via the result, never silently dropped.
PurificationResult purify(const QuadTreeMatrix& x0, const PurificationConfig& config);

/// Convenience: initial_transform followed by purify.
PurificationResult purify_fock(const QuadTreeMatrix& fock, const SpectralTransform& t,
                               const PurificationConfig& config);

}  // namespace spamm
