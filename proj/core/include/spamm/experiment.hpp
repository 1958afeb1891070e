#pragma once
//
// Project     : spamm-ec
// Module      : experiment
// Description : squaring / purification experiment runners and record output
//

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spamm/error_control.hpp"
#include "spamm/oracle.hpp"
#include "spamm/purification.hpp"
#include "spamm/run_record.hpp"

namespace spamm {

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  /// Input matrix: a MatrixMarket file, or a generated decay-model instance.
  /// Exactly one of the two must be set.
  std::optional<std::string> matrix_file;
  std::optional<oracle::DecayModelSpec> generated;

  std::vector<Variant> variants{Variant::truncmul, Variant::spamm, Variant::hybrid};
  std::vector<double> tolerances;  // requested deltas for squaring runs
  ToleranceGrid grid = ToleranceGrid::geometric();
  int leaf_size = QuadTreeMatrix::kDefaultLeafSize;
  int threads = 1;

  // Purification-only parameters.
  int occupation = 0;
  double epsilon = 1e-5;
  int max_iterations = 100;
  /// Spectrum bounds for the initial transform; computed from Gershgorin
  /// discs of the input when unset.
  std::optional<SpectralTransform> spectral;
};

/// The two-step squaring protocol, per (variant, tolerance): square the input
/// approximately, square the result again with the same tolerance, then take
/// the exact square of the second input to measure the realized error.
/// Timings and nnz counts are recorded for the second squaring only. A
/// tolerance violation is recorded in the row status (callers turn it into a
/// nonzero exit).
std::vector<RunRecord> run_squaring_experiment(const ExperimentConfig& config);

/// Full purification with every configured variant; per-iteration rows are
/// followed by one summary row per variant comparing the final density matrix
/// against the dense eigensolver when the dimension is at most 1024.
std::vector<RunRecord> run_purification_experiment(const ExperimentConfig& config);

bool any_violation(const std::vector<RunRecord>& records);

/// Fixed CSV column order; floats carry 17 significant digits so re-reading
/// reproduces them bitwise. The JSON form holds the same fields per record
/// plus trace and the (fixed) process count.
extern const char* const kCsvHeader;

void emit(const std::vector<RunRecord>& records, std::ostream& out, OutputFormat format);
void emit_file(const std::vector<RunRecord>& records, const std::string& path, OutputFormat format);

}  // namespace spamm
