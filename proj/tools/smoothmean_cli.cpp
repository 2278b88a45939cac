// Command-line front end for the simulation harness.
//
//   smoothmean sweep-ratio --dist normal --var-level low --n 20 --out fig2.csv
//   smoothmean sweep-n     --dist lognormal --ratio 1.0 --out fig3.csv
//   smoothmean dump        --dist lognormal --n 20 --ratio 1.0 --out hist.csv
//   smoothmean bounds      --dist lognormal --n 20 --ratio 1.0 --out bounds.csv
//
// Exit codes: 0 success, 2 invalid arguments, 3 I/O failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "smoothmean/harness.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct InvalidArgs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string dist = "normal";
  std::string var_level = "low";
  std::vector<double> ratios;
  std::vector<std::size_t> ns;
  std::size_t trials = 10000;
  double delta = 0.01;
  std::uint64_t seed = 20190530;
  std::string methods;
  std::string out = "-";
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--dist", opt.dist, "Data family")
      ->check(CLI::IsMember({"normal", "lognormal"}));
  cmd->add_option("--var-level", opt.var_level, "Variance level")
      ->check(CLI::IsMember({"low", "mid", "high"}));
  cmd->add_option("--ratio", opt.ratios, "Mean/SD ratio (comma list for sweep-ratio)")
      ->delimiter(',');
  cmd->add_option("--n", opt.ns, "Sample size (comma list for sweep-n)")->delimiter(',');
  cmd->add_option("--trials", opt.trials, "Trials per cell")->check(CLI::PositiveNumber);
  cmd->add_option("--delta", opt.delta, "Confidence parameter in (0, 1/2)");
  cmd->add_option("--seed", opt.seed, "Master seed");
  cmd->add_option("--methods", opt.methods, "Comma-separated estimator ids (default: all)");
  cmd->add_option("--out", opt.out, "Output CSV path ('-' for stdout)");
  cmd->add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber);
}

std::vector<smoothmean::EstimatorId> parse_methods(const std::string& list) {
  using smoothmean::kAllEstimators;
  if (list.empty()) return {kAllEstimators.begin(), kAllEstimators.end()};
  std::vector<smoothmean::EstimatorId> ids;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto id = smoothmean::parse_estimator(item);
    if (!id) throw InvalidArgs("unknown method '" + item + "'");
    ids.push_back(*id);
  }
  if (ids.empty()) throw InvalidArgs("--methods is empty");
  return ids;
}

double single_ratio(const Options& opt) {
  if (opt.ratios.empty()) return 1.0;
  if (opt.ratios.size() != 1) throw InvalidArgs("--ratio takes a single value here");
  return opt.ratios.front();
}

std::size_t single_n(const Options& opt) {
  if (opt.ns.empty()) return 20;
  if (opt.ns.size() != 1) throw InvalidArgs("--n takes a single value here");
  return opt.ns.front();
}

smoothmean::ExperimentConfig base_config(const Options& opt, std::string label) {
  smoothmean::ExperimentConfig config;
  config.label = std::move(label);
  config.model.family = *smoothmean::parse_family(opt.dist);
  config.model.level = *smoothmean::parse_variance_level(opt.var_level);
  config.trials = opt.trials;
  config.delta = opt.delta;
  config.seed = opt.seed;
  config.methods = parse_methods(opt.methods);
  config.workers = opt.workers;
  if (!(opt.delta > 0.0 && opt.delta < 0.5)) throw InvalidArgs("--delta must lie in (0, 1/2)");
  for (double r : opt.ratios) {
    if (!(r >= -1e6 && r <= 1e6)) throw InvalidArgs("--ratio must be finite");
  }
  for (std::size_t n : opt.ns) {
    if (n == 0) throw InvalidArgs("--n must be positive");
  }
  return config;
}

// Writes through `emit` to stdout or to a file, reporting failures with the path.
template <class Emit>
void with_output(const std::string& path, Emit&& emit) {
  if (path == "-") {
    emit(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoFailure("failed writing to stdout");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoFailure("cannot open '" + path + "' for writing");
  emit(file);
  file.close();
  if (!file) throw IoFailure("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smoothed-perturbation mean estimation: simulation harness"};
  app.require_subcommand(1);

  Options sweep_ratio_opt, sweep_n_opt, dump_opt, bounds_opt;
  auto* sweep_ratio_cmd = app.add_subcommand("sweep-ratio", "Mean deviation over a ratio grid");
  auto* sweep_n_cmd = app.add_subcommand("sweep-n", "Mean deviation over a sample-size grid");
  auto* dump_cmd = app.add_subcommand("dump", "Per-trial deviations for one cell");
  auto* bounds_cmd = app.add_subcommand("bounds", "Deviation bounds for one cell");
  add_common(sweep_ratio_cmd, sweep_ratio_opt);
  add_common(sweep_n_cmd, sweep_n_opt);
  add_common(dump_cmd, dump_opt);
  add_common(bounds_cmd, bounds_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (sweep_ratio_cmd->parsed()) {
      const Options& opt = sweep_ratio_opt;
      auto config = base_config(opt, "sweep-ratio");
      config.n = single_n(opt);
      const auto grid = opt.ratios.empty() ? smoothmean::default_ratio_grid() : opt.ratios;
      smoothmean::validate(config);
      const auto cells = smoothmean::sweep_ratio(config, grid);
      with_output(opt.out, [&](std::ostream& os) { smoothmean::write_sweep_csv(os, cells); });
    } else if (sweep_n_cmd->parsed()) {
      const Options& opt = sweep_n_opt;
      auto config = base_config(opt, "sweep-n");
      config.model.ratio = single_ratio(opt);
      const auto grid = opt.ns.empty() ? smoothmean::default_n_grid() : opt.ns;
      smoothmean::validate(config);
      const auto cells = smoothmean::sweep_n(config, grid);
      with_output(opt.out, [&](std::ostream& os) { smoothmean::write_sweep_csv(os, cells); });
    } else if (dump_cmd->parsed()) {
      const Options& opt = dump_opt;
      auto config = base_config(opt, "dump");
      config.model.ratio = single_ratio(opt);
      config.n = single_n(opt);
      smoothmean::validate(config);
      with_output(opt.out, [&](std::ostream& os) {
        smoothmean::write_dump_header(os);
        smoothmean::run_experiment(
            config, [&](const smoothmean::DeviationRecord& r) { smoothmean::write_dump_row(os, r); });
      });
    } else if (bounds_cmd->parsed()) {
      const Options& opt = bounds_opt;
      auto config = base_config(opt, "bounds");
      config.model.ratio = single_ratio(opt);
      config.n = single_n(opt);
      const auto rows = smoothmean::bounds_table(config);
      with_output(opt.out, [&](std::ostream& os) { smoothmean::write_bounds_csv(os, rows); });
    }
  } catch (const InvalidArgs& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
