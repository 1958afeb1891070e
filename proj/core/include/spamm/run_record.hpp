#pragma once
//
// Project     : spamm-ec
// Module      : run_record
// Description : per-iteration measurement row shared by purification and bench
//

#include <cstdint>
#include <string>

namespace spamm {

/// One measured step of an experiment or purification run. Wall times are
/// excluded from determinism guarantees; everything else reproduces bitwise
/// for a fixed seed and configuration.
struct RunRecord {
  std::string variant;
  int iteration = 0;
  double tolerance = 0.0;   // requested delta (or epsilon for summary rows)
  double chosen_tau = 0.0;  // 0 for exact multiplication
  double t_mul = 0.0;       // exact multiplication seconds
  double t_trunc = 0.0;     // truncation seconds
  double t_spamm = 0.0;     // approximate multiplication seconds
  double t_cse = 0.0;       // error sweep seconds
  std::int64_t nnz_in = 0;
  std::int64_t nnz_mid = 0;  // intermediate product, before any truncation
  std::int64_t nnz_out = 0;
  std::int64_t nnz_blocks_out = 0;
  double realized_error = 0.0;  // Frobenius distance to the exact result
  std::string status;           // ok | violation | converged | no-convergence | final-ok | final-violation
  double trace = 0.0;           // emitted in JSON only, not a CSV column
};

}  // namespace spamm
