//
// Project     : spamm-ec
// Module      : spamm-ec CLI
// Description : experiment runner around the squaring and purification drivers
//

#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spamm/experiment.hpp"

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw CLI::ValidationError(what, "'" + text + "' is not a number");
  }
  if (used != text.size()) throw CLI::ValidationError(what, "'" + text + "' is not a number");
  return value;
}

std::vector<spamm::Variant> parse_variants(const std::string& text) {
  std::vector<spamm::Variant> variants;
  for (const std::string& name : split(text, ',')) {
    const auto v = spamm::parse_variant(name);
    if (!v) throw CLI::ValidationError("--variants", "unknown variant '" + name + "'");
    variants.push_back(*v);
  }
  if (variants.empty()) throw CLI::ValidationError("--variants", "empty variant list");
  return variants;
}

// Either a comma-separated list of values, or "start:end:log[:count]" for a
// logarithmically spaced sweep (default: one value per decade, inclusive).
std::vector<double> parse_tolerances(const std::string& text) {
  const std::vector<std::string> colon_parts = split(text, ':');
  if (colon_parts.size() >= 3 && colon_parts[2] == "log") {
    const double start = parse_double(colon_parts[0], "--tolerances");
    const double end = parse_double(colon_parts[1], "--tolerances");
    if (!(start > 0.0) || !(end > 0.0)) {
      throw CLI::ValidationError("--tolerances", "log sweeps need positive endpoints");
    }
    int count = 0;
    if (colon_parts.size() >= 4) {
      count = static_cast<int>(parse_double(colon_parts[3], "--tolerances"));
    } else {
      count = static_cast<int>(std::lround(std::abs(std::log10(start) - std::log10(end)))) + 1;
    }
    if (count < 2) throw CLI::ValidationError("--tolerances", "log sweeps need at least 2 points");
    std::vector<double> values(static_cast<std::size_t>(count));
    const double step = (std::log10(end) - std::log10(start)) / (count - 1);
    for (int k = 0; k < count; ++k) values[k] = std::pow(10.0, std::log10(start) + k * step);
    return values;
  }
  std::vector<double> values;
  for (const std::string& item : split(text, ',')) {
    values.push_back(parse_double(item, "--tolerances"));
  }
  if (values.empty()) throw CLI::ValidationError("--tolerances", "empty tolerance list");
  return values;
}

// "n,alpha,seed" with scale and spectral target supplied separately.
spamm::oracle::DecayModelSpec parse_generator(const std::string& text, double scale, double low,
                                              double high) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 3) {
    throw CLI::ValidationError("--gen", "expected n,alpha,seed, got '" + text + "'");
  }
  spamm::oracle::DecayModelSpec spec;
  spec.dimension = static_cast<int>(parse_double(parts[0], "--gen"));
  spec.alpha = parse_double(parts[1], "--gen");
  spec.seed = static_cast<std::uint64_t>(parse_double(parts[2], "--gen"));
  spec.scale = scale;
  spec.spectral_low = low;
  spec.spectral_high = high;
  return spec;
}

spamm::OutputFormat pick_format(const std::string& path, const std::string& explicit_format) {
  if (explicit_format == "csv") return spamm::OutputFormat::csv;
  if (explicit_format == "json") return spamm::OutputFormat::json;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return spamm::OutputFormat::json;
  return spamm::OutputFormat::csv;
}

void print_summary(const std::vector<spamm::RunRecord>& records, const std::string& out_path) {
  std::size_t violations = 0;
  for (const auto& r : records) {
    if (r.status == "violation" || r.status == "final-violation" || r.status == "no-convergence") {
      ++violations;
    }
  }
  std::cout << records.size() << " record(s) written to " << out_path;
  if (violations > 0) std::cout << "; " << violations << " violation(s)";
  std::cout << '\n';
}

struct CommonOptions {
  std::string tolerances = "1e-2:1e-8:log";
  std::string variants = "truncmul,spamm,hybrid";
  double grid_start = 1.0;
  double grid_ratio = 0.9;
  int grid_count = 350;
  int leaf = 32;
  int threads = 1;
  double gen_scale = 0.3;
  double gen_low = 0.0;
  double gen_high = 2.0;
  std::string out;
  std::string format = "auto";
};

void add_common_options(CLI::App& cmd, CommonOptions& opt) {
  cmd.add_option("--grid-start", opt.grid_start, "Largest candidate SpAMM tolerance");
  cmd.add_option("--grid-ratio", opt.grid_ratio, "Geometric ratio between candidates, in (0,1)");
  cmd.add_option("--grid-count", opt.grid_count, "Number of candidate tolerances");
  cmd.add_option("--leaf", opt.leaf, "Dense leaf block size");
  cmd.add_option("--threads", opt.threads, "Worker threads (results are thread-count independent)");
  cmd.add_option("--gen-scale", opt.gen_scale, "Generator off-diagonal magnitude scale");
  cmd.add_option("--gen-low", opt.gen_low, "Generator spectral target, lower end");
  cmd.add_option("--gen-high", opt.gen_high, "Generator spectral target, upper end");
  cmd.add_option("--format", opt.format, "Output format: csv, json, or auto (by extension)")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spamm-ec: sparse approximate matrix multiplication with strict error control"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value config file (flags win)");

  // --- square ---------------------------------------------------------
  CLI::App* square = app.add_subcommand(
      "square", "Two-step squaring experiment per variant and tolerance");
  CommonOptions sq;
  sq.out = "results.csv";
  std::string sq_matrix;
  square->add_option("--matrix", sq_matrix, "Input: MatrixMarket file or gen:n,alpha,seed")
      ->required();
  square->add_option("--variants", sq.variants, "Comma list: truncmul,spamm,hybrid");
  square->add_option("--tolerances", sq.tolerances,
                     "Comma list of deltas or start:end:log[:count] sweep");
  square->add_option("--out", sq.out, "Output path");
  add_common_options(*square, sq);

  // --- purify ---------------------------------------------------------
  CLI::App* purify = app.add_subcommand("purify", "Density matrix purification run");
  CommonOptions pu;
  pu.out = "run.json";
  std::string pu_gen;
  std::string pu_matrix;
  std::string pu_variant = "hybrid";
  int occupation = 0;
  double epsilon = 1e-5;
  int max_iter = 100;
  double lambda_min = 0.0, lambda_max = 0.0;
  bool have_lambda_min = false, have_lambda_max = false;
  purify->add_option("--gen", pu_gen, "Generated input: n,alpha,seed");
  purify->add_option("--matrix", pu_matrix, "Input MatrixMarket file (symmetric content expected)");
  purify->add_option("--occupation", occupation, "Target trace of the density matrix")->required();
  purify->add_option("--epsilon", epsilon, "Global error tolerance");
  purify->add_option("--variant", pu_variant, "truncmul, spamm, or hybrid")
      ->check(CLI::IsMember({"truncmul", "spamm", "hybrid"}));
  purify->add_option("--max-iter", max_iter, "Iteration cap");
  purify->add_option("--lambda-min", lambda_min, "Spectrum lower bound (default: Gershgorin)")
      ->each([&](const std::string&) { have_lambda_min = true; });
  purify->add_option("--lambda-max", lambda_max, "Spectrum upper bound (default: Gershgorin)")
      ->each([&](const std::string&) { have_lambda_max = true; });
  purify->add_option("--out", pu.out, "Output path");
  add_common_options(*purify, pu);

  CLI11_PARSE(app, argc, argv);

  try {
    if (square->parsed()) {
      spamm::ExperimentConfig config;
      if (sq_matrix.rfind("gen:", 0) == 0) {
        config.generated = parse_generator(sq_matrix.substr(4), sq.gen_scale, sq.gen_low, sq.gen_high);
      } else {
        config.matrix_file = sq_matrix;
      }
      config.variants = parse_variants(sq.variants);
      config.tolerances = parse_tolerances(sq.tolerances);
      config.grid = spamm::ToleranceGrid::geometric(sq.grid_start, sq.grid_ratio, sq.grid_count);
      config.leaf_size = sq.leaf;
      config.threads = sq.threads;

      const auto records = spamm::run_squaring_experiment(config);
      spamm::emit_file(records, sq.out, pick_format(sq.out, sq.format));
      print_summary(records, sq.out);
      return spamm::any_violation(records) ? 1 : 0;
    }

    spamm::ExperimentConfig config;
    if (!pu_gen.empty() && !pu_matrix.empty()) {
      throw CLI::ValidationError("purify", "choose either --gen or --matrix");
    }
    if (!pu_gen.empty()) {
      config.generated = parse_generator(pu_gen, pu.gen_scale, pu.gen_low, pu.gen_high);
    } else if (!pu_matrix.empty()) {
      config.matrix_file = pu_matrix;
    } else {
      throw CLI::ValidationError("purify", "one of --gen or --matrix is required");
    }
    config.variants = {*spamm::parse_variant(pu_variant)};
    config.grid = spamm::ToleranceGrid::geometric(pu.grid_start, pu.grid_ratio, pu.grid_count);
    config.leaf_size = pu.leaf;
    config.threads = pu.threads;
    config.occupation = occupation;
    config.epsilon = epsilon;
    config.max_iterations = max_iter;
    if (have_lambda_min != have_lambda_max) {
      throw CLI::ValidationError("purify", "--lambda-min and --lambda-max go together");
    }
    if (have_lambda_min) config.spectral = spamm::SpectralTransform{lambda_min, lambda_max};

    const auto records = spamm::run_purification_experiment(config);
    spamm::emit_file(records, pu.out, pick_format(pu.out, pu.format));
    print_summary(records, pu.out);
    return spamm::any_violation(records) ? 1 : 0;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
