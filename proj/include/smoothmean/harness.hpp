#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smoothmean/bounds.hpp"
#include "smoothmean/estimators.hpp"

namespace smoothmean {

enum class DataFamily { normal, lognormal };
enum class VarianceLevel { low, mid, high };

std::string_view to_string(DataFamily family);
std::string_view to_string(VarianceLevel level);
std::optional<DataFamily> parse_family(std::string_view name);
std::optional<VarianceLevel> parse_variance_level(std::string_view name);

/// Data distribution with its mean pinned to ratio * sd.
struct DataModel {
  DataFamily family = DataFamily::normal;
  VarianceLevel level = VarianceLevel::low;
  double ratio = 0.0;
};

/// sigma (Normal: 0.5, 5, 50) or sigma_log (log-Normal: 1.1, 1.35, 1.75).
double spread_parameter(DataFamily family, VarianceLevel level);

struct PopulationMoments {
  double mean = 0.0;
  double variance = 0.0;
  double second_moment = 0.0;
};

PopulationMoments population_moments(const DataModel& model);

using Rng = std::mt19937_64;

/// Per-trial generator seed; a pure function of (master seed, trial index).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

struct GeneratedSample {
  std::vector<double> values;
  PopulationMoments truth;
};

/// Normal data are N(r sd, sigma^2). log-Normal data are exp(sigma_log Z)
/// minus their pre-shift mean exp(sigma_log^2 / 2), plus r sd.
GeneratedSample generate_sample(const DataModel& model, std::size_t n, Rng& rng);

MomentInfo moment_info(const PopulationMoments& truth, std::size_t n, double delta);

struct ExperimentConfig {
  std::string label = "dump";
  DataModel model;
  std::size_t n = 20;
  std::size_t trials = 10000;
  double delta = 0.01;
  std::uint64_t seed = 20190530;
  std::vector<EstimatorId> methods{kAllEstimators.begin(), kAllEstimators.end()};
  /// Per-method knobs; `id` is overwritten for each method.
  EstimatorConfig estimator_defaults;
  unsigned workers = 1;
};

/// Throws std::invalid_argument on an unusable configuration.
void validate(const ExperimentConfig& config);

struct DeviationRecord {
  /// Points into the label of the config that produced the record.
  std::string_view experiment;
  EstimatorId method = EstimatorId::mean;
  DataModel model;
  std::size_t n = 0;
  std::size_t trial = 0;
  /// |estimate - true mean|; empty when the estimator failed.
  std::optional<double> deviation;
  std::string error;
};

using RecordSink = std::function<void(const DeviationRecord&)>;

/// Runs every trial, evaluating all methods on a shared sample per trial.
/// Records reach the sink in (trial, method) order regardless of `workers`.
void run_experiment(const ExperimentConfig& config, const RecordSink& sink);

std::vector<DeviationRecord> collect_experiment(const ExperimentConfig& config);

struct CellSummary {
  std::string experiment;
  EstimatorId method = EstimatorId::mean;
  DataModel model;
  std::size_t n = 0;
  /// Average deviation over successful trials (NaN if none succeeded).
  double mean_deviation = 0.0;
  std::size_t trials = 0;
};

/// One summary per method for a single experiment cell.
std::vector<CellSummary> summarize_experiment(const ExperimentConfig& config);

std::vector<double> default_ratio_grid();
std::vector<std::size_t> default_n_grid();

std::vector<CellSummary> sweep_ratio(const ExperimentConfig& base, std::span<const double> ratios);
std::vector<CellSummary> sweep_n(const ExperimentConfig& base, std::span<const std::size_t> ns);

struct BoundRow {
  DataModel model;
  std::size_t n = 0;
  double delta = 0.0;
  BoundReport report;
};

/// Bounds for every bounded method in base.methods at the true moments.
std::vector<BoundRow> bounds_table(const ExperimentConfig& base);

// CSV serialization; doubles are written with 17 significant digits.
std::string format_double(double value);
void write_dump_header(std::ostream& out);
void write_dump_row(std::ostream& out, const DeviationRecord& record);
void write_sweep_csv(std::ostream& out, std::span<const CellSummary> cells);
void write_bounds_csv(std::ostream& out, std::span<const BoundRow> rows);

}  // namespace smoothmean
