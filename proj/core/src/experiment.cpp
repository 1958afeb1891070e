#include "spamm/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "spamm/execution.hpp"
#include "spamm/matrix_market.hpp"
#include "spamm/multiply.hpp"

namespace spamm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

QuadTreeMatrix load_input(const ExperimentConfig& config, DenseMatrix* dense_out = nullptr) {
  if (config.matrix_file && config.generated) {
    throw std::invalid_argument("experiment: choose either a matrix file or a generated instance");
  }
  if (config.matrix_file) {
    const CoordinateData data = read_matrix_market_file(*config.matrix_file);
    QuadTreeMatrix x = QuadTreeMatrix::from_coordinates(data.entries, data.dimension, config.leaf_size);
    if (dense_out) *dense_out = x.to_dense();
    return x;
  }
  if (config.generated) {
    const DenseMatrix dense = oracle::generate_decay_matrix(*config.generated);
    QuadTreeMatrix x = QuadTreeMatrix::from_dense(dense, config.leaf_size);
    if (dense_out) *dense_out = dense;
    return x;
  }
  throw std::invalid_argument("experiment: no input matrix configured");
}

/// One approximate square with the variant's method; fills the timing, nnz_mid
/// and chosen_tau fields of the record.
QuadTreeMatrix approximate_square(const QuadTreeMatrix& x, Variant variant, double delta,
                                  const ToleranceGrid& grid, RunRecord& rec) {
  switch (variant) {
    case Variant::truncmul: {
      const auto mul_start = Clock::now();
      QuadTreeMatrix product = multiply_exact(x, x);
      rec.t_mul = seconds_since(mul_start);
      rec.nnz_mid = product.nnz();
      const auto trunc_start = Clock::now();
      TruncationResult tr = truncate(product, delta);
      rec.t_trunc = seconds_since(trunc_start);
      rec.chosen_tau = 0.0;
      return std::move(tr.matrix);
    }
    case Variant::spamm: {
      ControlledProduct cp = spamm_with_error_control(x, x, delta, grid);
      rec.t_cse = cp.cse_seconds;
      rec.t_spamm = cp.spamm_seconds;
      rec.chosen_tau = cp.chosen_tau.tau;
      rec.nnz_mid = cp.matrix.nnz();
      return std::move(cp.matrix);
    }
    case Variant::hybrid: {
      ControlledProduct cp = spamm_with_error_control(x, x, delta / 2.0, grid);
      rec.t_cse = cp.cse_seconds;
      rec.t_spamm = cp.spamm_seconds;
      rec.chosen_tau = cp.chosen_tau.tau;
      rec.nnz_mid = cp.matrix.nnz();
      const auto trunc_start = Clock::now();
      TruncationResult tr = truncate(cp.matrix, delta / 2.0);
      rec.t_trunc = seconds_since(trunc_start);
      return std::move(tr.matrix);
    }
  }
  throw std::logic_error("approximate_square: unknown variant");
}

void format_double(std::string& out, double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  out += buffer;
}

}  // namespace

const char* const kCsvHeader =
    "variant,iter,tolerance,chosen_tau,t_mul,t_trunc,t_spamm,t_cse,"
    "nnz_in,nnz_mid,nnz_out,nnz_blocks_out,realized_error,status";

std::vector<RunRecord> run_squaring_experiment(const ExperimentConfig& config) {
  if (config.tolerances.empty()) throw std::invalid_argument("experiment: tolerance list is empty");
  if (config.variants.empty()) throw std::invalid_argument("experiment: variant list is empty");
  exec::set_max_threads(config.threads);

  const QuadTreeMatrix input = load_input(config);

  std::vector<RunRecord> records;
  records.reserve(config.variants.size() * config.tolerances.size());
  for (const Variant variant : config.variants) {
    for (const double delta : config.tolerances) {
      if (!(delta > 0.0)) throw std::invalid_argument("experiment: tolerances must be positive");
      RunRecord warmup;  // first iteration, timings discarded
      const QuadTreeMatrix first = approximate_square(input, variant, delta, config.grid, warmup);

      RunRecord rec;
      rec.variant = std::string(to_string(variant));
      rec.iteration = 2;
      rec.tolerance = delta;
      rec.nnz_in = first.nnz();
      const QuadTreeMatrix second = approximate_square(first, variant, delta, config.grid, rec);
      rec.nnz_out = second.nnz();
      rec.nnz_blocks_out = second.nnz_blocks();
      rec.trace = second.trace();

      const QuadTreeMatrix exact = multiply_exact(first, first);
      rec.realized_error = add(second, exact.scale(-1.0)).frobenius_norm();
      rec.status = rec.realized_error < delta ? "ok" : "violation";
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::vector<RunRecord> run_purification_experiment(const ExperimentConfig& config) {
  if (config.variants.empty()) throw std::invalid_argument("experiment: variant list is empty");
  exec::set_max_threads(config.threads);

  DenseMatrix dense_fock;
  const QuadTreeMatrix fock = load_input(config, &dense_fock);

  SpectralTransform spectral;
  if (config.spectral) {
    spectral = *config.spectral;
  } else if (config.generated) {
    spectral = {config.generated->spectral_low, config.generated->spectral_high};
  } else {
    const auto [low, high] = oracle::gershgorin_bounds(dense_fock);
    spectral = {low, high};
  }

  const QuadTreeMatrix x0 = initial_transform(fock, spectral);

  std::optional<DenseMatrix> reference;
  if (fock.dimension() <= 1024) {
    reference = oracle::density_matrix_oracle(dense_fock, config.occupation);
  }

  std::vector<RunRecord> records;
  for (const Variant variant : config.variants) {
    PurificationConfig pc;
    pc.variant = variant;
    pc.occupation = config.occupation;
    pc.max_iterations = config.max_iterations;
    pc.epsilon = config.epsilon;
    pc.grid = config.grid;
    const PurificationResult result = purify(x0, pc);
    records.insert(records.end(), result.log.begin(), result.log.end());

    RunRecord summary;
    summary.variant = std::string(to_string(variant));
    summary.iteration = result.iterations + 1;
    summary.tolerance = config.epsilon;
    summary.nnz_in = x0.nnz();
    summary.nnz_mid = result.density.nnz();
    summary.nnz_out = result.density.nnz();
    summary.nnz_blocks_out = result.density.nnz_blocks();
    summary.trace = result.density.trace();
    if (!result.converged) {
      summary.status = "no-convergence";
      summary.realized_error = 0.0;
    } else if (reference) {
      const DenseMatrix approx = result.density.to_dense();
      double sumsq = 0.0;
      for (std::size_t i = 0; i < approx.size(); ++i) {
        const double diff = approx.data()[i] - reference->data()[i];
        sumsq += diff * diff;
      }
      summary.realized_error = std::sqrt(sumsq);
      summary.status = summary.realized_error < config.epsilon ? "final-ok" : "final-violation";
    } else {
      summary.realized_error = 0.0;
      summary.status = "final-unverified";
    }
    records.push_back(std::move(summary));
  }
  return records;
}

bool any_violation(const std::vector<RunRecord>& records) {
  for (const RunRecord& rec : records) {
    if (rec.status == "violation" || rec.status == "final-violation" ||
        rec.status == "no-convergence") {
      return true;
    }
  }
  return false;
}

void emit(const std::vector<RunRecord>& records, std::ostream& out, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << kCsvHeader << '\n';
    std::string line;
    for (const RunRecord& r : records) {
      line.clear();
      line += r.variant;
      line += ',';
      line += std::to_string(r.iteration);
      line += ',';
      format_double(line, r.tolerance);
      line += ',';
      format_double(line, r.chosen_tau);
      line += ',';
      format_double(line, r.t_mul);
      line += ',';
      format_double(line, r.t_trunc);
      line += ',';
      format_double(line, r.t_spamm);
      line += ',';
      format_double(line, r.t_cse);
      line += ',';
      line += std::to_string(r.nnz_in);
      line += ',';
      line += std::to_string(r.nnz_mid);
      line += ',';
      line += std::to_string(r.nnz_out);
      line += ',';
      line += std::to_string(r.nnz_blocks_out);
      line += ',';
      format_double(line, r.realized_error);
      line += ',';
      line += r.status;
      out << line << '\n';
    }
    return;
  }

  nlohmann::json doc = nlohmann::json::array();
  for (const RunRecord& r : records) {
    doc.push_back({
        {"variant", r.variant},
        {"iter", r.iteration},
        {"tolerance", r.tolerance},
        {"chosen_tau", r.chosen_tau},
        {"t_mul", r.t_mul},
        {"t_trunc", r.t_trunc},
        {"t_spamm", r.t_spamm},
        {"t_cse", r.t_cse},
        {"nnz_in", r.nnz_in},
        {"nnz_mid", r.nnz_mid},
        {"nnz_out", r.nnz_out},
        {"nnz_blocks_out", r.nnz_blocks_out},
        {"realized_error", r.realized_error},
        {"status", r.status},
        {"trace", r.trace},
        {"processes", 1},
    });
  }
  out << doc.dump(2) << '\n';
}

void emit_file(const std::vector<RunRecord>& records, const std::string& path,
               OutputFormat format) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
  emit(records, out, format);
}

}  // namespace spamm
