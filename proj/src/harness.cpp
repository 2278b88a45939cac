#include "smoothmean/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace smoothmean {
namespace {

constexpr std::size_t kChunkTrials = 512;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

struct TrialOutcome {
  std::vector<std::optional<double>> deviations;
  std::vector<std::string> errors;
};

TrialOutcome run_trial(const ExperimentConfig& config, std::size_t trial) {
  Rng rng(trial_seed(config.seed, trial));
  const GeneratedSample sample = generate_sample(config.model, config.n, rng);
  const MomentInfo moments = moment_info(sample.truth, config.n, config.delta);

  TrialOutcome outcome;
  outcome.deviations.resize(config.methods.size());
  outcome.errors.resize(config.methods.size());
  for (std::size_t j = 0; j < config.methods.size(); ++j) {
    EstimatorConfig est = config.estimator_defaults;
    est.id = config.methods[j];
    try {
      const double value = estimate(est, sample.values, moments);
      if (!std::isfinite(value)) throw std::runtime_error("non-finite estimate");
      outcome.deviations[j] = std::fabs(value - sample.truth.mean);
    } catch (const std::exception& e) {
      outcome.errors[j] = e.what();
    }
  }
  return outcome;
}

}  // namespace

std::string_view to_string(DataFamily family) {
  return family == DataFamily::normal ? "normal" : "lognormal";
}

std::string_view to_string(VarianceLevel level) {
  switch (level) {
    case VarianceLevel::low:
      return "low";
    case VarianceLevel::mid:
      return "mid";
    case VarianceLevel::high:
      return "high";
  }
  return "low";
}

std::optional<DataFamily> parse_family(std::string_view name) {
  if (name == "normal") return DataFamily::normal;
  if (name == "lognormal") return DataFamily::lognormal;
  return std::nullopt;
}

std::optional<VarianceLevel> parse_variance_level(std::string_view name) {
  if (name == "low") return VarianceLevel::low;
  if (name == "mid") return VarianceLevel::mid;
  if (name == "high") return VarianceLevel::high;
  return std::nullopt;
}

double spread_parameter(DataFamily family, VarianceLevel level) {
  static constexpr double kNormal[] = {0.5, 5.0, 50.0};
  static constexpr double kLogNormal[] = {1.1, 1.35, 1.75};
  const auto idx = static_cast<std::size_t>(level);
  return family == DataFamily::normal ? kNormal[idx] : kLogNormal[idx];
}

PopulationMoments population_moments(const DataModel& model) {
  const double spread = spread_parameter(model.family, model.level);
  double variance = spread * spread;
  if (model.family == DataFamily::lognormal) {
    const double v = spread * spread;
    variance = std::expm1(v) * std::exp(v);
  }
  PopulationMoments truth;
  truth.variance = variance;
  truth.mean = model.ratio * std::sqrt(variance);
  truth.second_moment = variance + truth.mean * truth.mean;
  return truth;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(splitmix64(master) + trial * 0xD1B54A32D192ED03ULL);
}

GeneratedSample generate_sample(const DataModel& model, std::size_t n, Rng& rng) {
  GeneratedSample sample;
  sample.truth = population_moments(model);
  sample.values.resize(n);
  const double spread = spread_parameter(model.family, model.level);
  std::normal_distribution<double> z(0.0, 1.0);
  if (model.family == DataFamily::normal) {
    for (double& x : sample.values) x = sample.truth.mean + spread * z(rng);
  } else {
    const double pre_shift_mean = std::exp(0.5 * spread * spread);
    for (double& x : sample.values) {
      x = std::exp(spread * z(rng)) - pre_shift_mean + sample.truth.mean;
    }
  }
  return sample;
}

MomentInfo moment_info(const PopulationMoments& truth, std::size_t n, double delta) {
  return MomentInfo{truth.second_moment, truth.variance, n, delta};
}

void validate(const ExperimentConfig& config) {
  if (config.n == 0) throw std::invalid_argument("n must be positive");
  if (config.trials == 0) throw std::invalid_argument("trials must be positive");
  if (!(config.delta > 0.0 && config.delta < 0.5)) {
    throw std::invalid_argument("delta must lie in (0, 1/2)");
  }
  if (!std::isfinite(config.model.ratio)) throw std::invalid_argument("ratio must be finite");
  if (config.methods.empty()) throw std::invalid_argument("no methods requested");
  if (config.workers == 0) throw std::invalid_argument("workers must be positive");
}

void run_experiment(const ExperimentConfig& config, const RecordSink& sink) {
  validate(config);
  const std::size_t workers = std::max<std::size_t>(1, config.workers);
  std::vector<TrialOutcome> chunk;

  for (std::size_t start = 0; start < config.trials; start += kChunkTrials) {
    const std::size_t count = std::min(kChunkTrials, config.trials - start);
    chunk.assign(count, TrialOutcome{});

    auto work = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) chunk[i] = run_trial(config, start + i);
    };
    if (workers == 1 || count < 2 * workers) {
      work(0, count);
    } else {
      std::vector<std::thread> pool;
      const std::size_t per = (count + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * per;
        const std::size_t hi = std::min(count, lo + per);
        if (lo < hi) pool.emplace_back(work, lo, hi);
      }
      for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < config.methods.size(); ++j) {
        DeviationRecord record;
        record.experiment = config.label;
        record.method = config.methods[j];
        record.model = config.model;
        record.n = config.n;
        record.trial = start + i;
        record.deviation = chunk[i].deviations[j];
        record.error = std::move(chunk[i].errors[j]);
        sink(record);
      }
    }
  }
}

std::vector<DeviationRecord> collect_experiment(const ExperimentConfig& config) {
  std::vector<DeviationRecord> records;
  records.reserve(config.trials * config.methods.size());
  run_experiment(config, [&](const DeviationRecord& r) { records.push_back(r); });
  return records;
}

std::vector<CellSummary> summarize_experiment(const ExperimentConfig& config) {
  std::vector<double> sums(config.methods.size(), 0.0);
  std::vector<std::size_t> counts(config.methods.size(), 0);
  std::size_t slot = 0;
  run_experiment(config, [&](const DeviationRecord& r) {
    const std::size_t j = slot++ % config.methods.size();
    if (r.deviation) {
      sums[j] += *r.deviation;
      ++counts[j];
    }
  });

  std::vector<CellSummary> cells;
  for (std::size_t j = 0; j < config.methods.size(); ++j) {
    CellSummary cell;
    cell.experiment = config.label;
    cell.method = config.methods[j];
    cell.model = config.model;
    cell.n = config.n;
    cell.trials = counts[j];
    cell.mean_deviation = counts[j] > 0 ? sums[j] / static_cast<double>(counts[j])
                                        : std::numeric_limits<double>::quiet_NaN();
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::vector<double> default_ratio_grid() {
  std::vector<double> grid;
  for (int i = -20; i <= 20; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::vector<std::size_t> default_n_grid() {
  std::vector<std::size_t> grid;
  for (std::size_t n = 10; n <= 100; n += 10) grid.push_back(n);
  return grid;
}

std::vector<CellSummary> sweep_ratio(const ExperimentConfig& base,
                                     std::span<const double> ratios) {
  if (ratios.empty()) throw std::invalid_argument("ratio grid is empty");
  std::vector<CellSummary> cells;
  for (double r : ratios) {
    ExperimentConfig config = base;
    config.model.ratio = r;
    auto part = summarize_experiment(config);
    cells.insert(cells.end(), part.begin(), part.end());
  }
  return cells;
}

std::vector<CellSummary> sweep_n(const ExperimentConfig& base, std::span<const std::size_t> ns) {
  if (ns.empty()) throw std::invalid_argument("sample-size grid is empty");
  std::vector<CellSummary> cells;
  for (std::size_t n : ns) {
    ExperimentConfig config = base;
    config.n = n;
    auto part = summarize_experiment(config);
    cells.insert(cells.end(), part.begin(), part.end());
  }
  return cells;
}

std::vector<BoundRow> bounds_table(const ExperimentConfig& base) {
  validate(base);
  const MomentInfo moments = moment_info(population_moments(base.model), base.n, base.delta);
  std::vector<BoundRow> rows;
  for (EstimatorId id : base.methods) {
    if (!has_bound(id)) continue;
    EstimatorConfig est = base.estimator_defaults;
    est.id = id;
    rows.push_back(BoundRow{base.model, base.n, base.delta, deviation_bound(est, moments)});
  }
  return rows;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto result =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

void write_dump_header(std::ostream& out) {
  out << "experiment,method,family,variance_level,ratio,n,trial,deviation,error\n";
}

void write_dump_row(std::ostream& out, const DeviationRecord& r) {
  out << csv_field(r.experiment) << ',' << to_string(r.method) << ',' << to_string(r.model.family)
      << ',' << to_string(r.model.level) << ',' << format_double(r.model.ratio) << ',' << r.n
      << ',' << r.trial << ',' << (r.deviation ? format_double(*r.deviation) : std::string())
      << ',' << csv_field(r.error) << '\n';
}

void write_sweep_csv(std::ostream& out, std::span<const CellSummary> cells) {
  out << "experiment,method,family,variance_level,ratio,n,mean_deviation,trials\n";
  for (const auto& c : cells) {
    out << csv_field(c.experiment) << ',' << to_string(c.method) << ','
        << to_string(c.model.family) << ',' << to_string(c.model.level) << ','
        << format_double(c.model.ratio) << ',' << c.n << ',' << format_double(c.mean_deviation)
        << ',' << c.trials << '\n';
  }
}

void write_bounds_csv(std::ostream& out, std::span<const BoundRow> rows) {
  out << "method,family,variance_level,ratio,n,delta,epsilon,kl,scale\n";
  for (const auto& row : rows) {
    const BoundReport& b = row.report;
    out << to_string(b.method) << ',' << to_string(row.model.family) << ','
        << to_string(row.model.level) << ',' << format_double(row.model.ratio) << ',' << row.n
        << ',' << format_double(row.delta) << ',' << format_double(b.epsilon) << ','
        << (b.kl ? format_double(*b.kl) : std::string()) << ','
        << (b.scale_used ? format_double(*b.scale_used) : std::string()) << '\n';
  }
}

}  // namespace smoothmean
