// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "smoothmean/bounds.hpp"
#include "smoothmean/harness.hpp"
#include "smoothmean/kernels.hpp"
#include "smoothmean/soft_trunc.hpp"
#include "smoothmean/specfn.hpp"

using namespace smoothmean;

namespace {

constexpr std::uint64_t kSeed = 20190530;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

ExperimentConfig cell(DataFamily family, VarianceLevel level, double ratio, std::size_t n,
                      std::vector<EstimatorId> methods) {
  ExperimentConfig c;
  c.label = "acceptance";
  c.model = {family, level, ratio};
  c.n = n;
  c.trials = 10000;
  c.delta = 0.01;
  c.seed = kSeed;
  c.methods = std::move(methods);
  return c;
}

double mean_deviation(const std::vector<CellSummary>& cells, EstimatorId id) {
  for (const auto& c : cells) {
    if (c.method == id) return c.mean_deviation;
  }
  return NAN;
}

// 1. Kernel oracle suite against 10^6-draw Monte Carlo.
Outcome kernel_oracles() {
  const std::size_t draws = 1'000'000;
  const double unit_mean = 1.0 / std::tgamma(1.5);
  struct Case {
    const char* name;
    KernelFamily family;
    std::vector<double> ws;
  };
  std::vector<Case> cases;
  cases.push_back({"Normal01", Normal01{}, oracle::draw_normal(draws, kSeed)});
  cases.push_back({"Weibull(2,1/G(1.5))", Weibull{2.0, unit_mean},
                   oracle::draw_weibull(draws, 2.0, unit_mean, kSeed)});
  cases.push_back({"Weibull(2,1)", Weibull{2.0, 1.0}, oracle::draw_weibull(draws, 2.0, 1.0, kSeed)});
  cases.push_back({"Student(5.1)", Student{5.1}, oracle::draw_student(draws, 5.1, kSeed)});

  bool pass = true;
  double worst = 0.0;
  std::size_t points = 0;
  std::vector<double> values(draws);
  for (const auto& c : cases) {
    const SmoothedKernel kernel(c.family);
    for (double a : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      for (double b : {0.05, 0.3, 1.0, 2.0, 3.0}) {
        for (double sign : {1.0, -1.0}) {
          const double bb = sign * b;
          for (std::size_t i = 0; i < draws; ++i) values[i] = oracle::psi(a + bb * c.ws[i]);
          const auto mc = oracle::mean_stderr(values);
          const double diff = std::fabs(kernel.smoothed_trunc({a, bb}) - mc.mean);
          const double limit = 5.0 * mc.stderr_ + 1e-9;
          worst = std::max(worst, diff / limit);
          pass = pass && diff <= limit;
          ++points;
        }
      }
    }
  }
  return {pass, fmt("%.0f points, worst |diff| / (5 se + 1e-9) = %.3f", static_cast<double>(points),
                    worst)};
}

// 2. Truncation envelope and indicator form.
Outcome truncation_envelope() {
  bool pass = true;
  double worst = -INFINITY;
  for (int i = 0; i < 10000; ++i) {
    const double u = -20.0 + 40.0 * i / 9999.0;
    const double v = soft_trunc(u);
    const double lo = soft_trunc_lower_envelope(u) - v;
    const double hi = v - soft_trunc_upper_envelope(u);
    worst = std::max({worst, lo, hi});
    pass = pass && lo <= 1e-12 && hi <= 1e-12 && soft_trunc_indicator_form(u) == v;
  }
  return {pass, fmt("10000 points, max envelope violation %.3g, indicator form exact", worst)};
}

// 3. Moment limits at u = 10^6.
Outcome moment_limits() {
  bool pass = true;
  double worst = 0.0;
  const double u = 1e6;
  for (const Weibull w : {Weibull{2.0, 1.0 / std::tgamma(1.5)}, Weibull{2.0, 1.0}}) {
    for (int k = 0; k <= 3; ++k) {
      const double expected = std::pow(w.scale, k) * std::tgamma(1.0 + k / w.shape);
      const double diff = std::fabs(base_moment_indicator(w, k, u) - expected);
      worst = std::max(worst, diff);
      pass = pass && diff <= 1e-6;
    }
  }
  for (double nu : {5.1, 6.0, 8.0}) {
    const double expected[4] = {1.0, 0.0, nu / (nu - 2.0), 0.0};
    for (int k = 0; k <= 3; ++k) {
      const double diff = std::fabs(base_moment_indicator(Student{nu}, k, u) - expected[k]);
      worst = std::max(worst, diff);
      pass = pass && diff <= 1e-6;
    }
  }
  return {pass, fmt("max |M(1e6) - E W^k| = %.3g", worst)};
}

// 4. Student identities by 10^7-draw Monte Carlo.
Outcome student_identities() {
  bool pass = true;
  std::string detail;
  for (double nu : {5.1, 8.0}) {
    const auto ws = oracle::draw_student(10'000'000, nu, kSeed);
    std::vector<double> logs(ws.size());
    std::vector<double> abs(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
      logs[i] = std::log1p(ws[i] * ws[i] / nu);
      abs[i] = std::fabs(ws[i]);
    }
    const auto log_mc = oracle::mean_stderr(logs);
    const auto abs_mc = oracle::mean_stderr(abs);
    const double log_exact = specfn::digamma(0.5 * (nu + 1.0)) - specfn::digamma(0.5 * nu);
    const double abs_exact = student_abs_mean(nu);
    const double z_log = std::fabs(log_mc.mean - log_exact) / log_mc.stderr_;
    const double z_abs = std::fabs(abs_mc.mean - abs_exact) / abs_mc.stderr_;
    pass = pass && z_log <= 5.0 && z_abs <= 5.0;
    detail += fmt("nu=%.1f: z(log)=%.2f z(|W|)=%.2f; ", nu, z_log, z_abs);
  }
  return {pass, detail};
}

// 5. Empirical coverage of every bound.
Outcome coverage() {
  std::vector<EstimatorId> bounded;
  for (EstimatorId id : kAllEstimators) {
    if (has_bound(id)) bounded.push_back(id);
  }
  const double limit = 0.02 + 3.0 * std::sqrt(0.02 / 10000.0);
  bool pass = true;
  double worst = 0.0;
  std::string worst_name;
  for (DataFamily family : {DataFamily::normal, DataFamily::lognormal}) {
    const auto config = cell(family, VarianceLevel::low, 1.0, 20, bounded);
    std::vector<double> eps;
    for (const auto& row : bounds_table(config)) eps.push_back(row.report.epsilon);
    std::vector<std::size_t> exceed(bounded.size(), 0);
    std::size_t slot = 0;
    run_experiment(config, [&](const DeviationRecord& r) {
      const std::size_t j = slot++ % bounded.size();
      if (!r.deviation || *r.deviation > eps[j]) ++exceed[j];
    });
    for (std::size_t j = 0; j < bounded.size(); ++j) {
      const double rate = static_cast<double>(exceed[j]) / 10000.0;
      if (rate >= worst) {
        worst = rate;
        worst_name = std::string(to_string(family)) + "/" + std::string(to_string(bounded[j]));
      }
      pass = pass && rate <= limit;
    }
  }
  return {pass, fmt("max exceedance rate %.4f (limit %.4f) at ", worst, limit) + worst_name};
}

// 6. Sensitivity ordering mult_b <= mult_w <= mult_g <= mult_s (2% slack).
Outcome sensitivity_ordering() {
  const std::vector<EstimatorId> order = {EstimatorId::mult_b, EstimatorId::mult_w,
                                          EstimatorId::mult_g, EstimatorId::mult_s};
  bool pass = true;
  std::string detail;
  for (double r : {-2.0, 2.0}) {
    const auto cells = summarize_experiment(cell(DataFamily::normal, VarianceLevel::low, r, 20, order));
    detail += fmt("r=%+.0f:", r);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const double v = mean_deviation(cells, order[i]);
      detail += fmt(" %.4f", v);
      if (i > 0) pass = pass && mean_deviation(cells, order[i - 1]) <= 1.02 * v;
    }
    detail += "; ";
  }
  return {pass, detail};
}

// 7. add_* mean deviations collapse onto mult_b at the high variance level.
Outcome high_variance_collapse() {
  const std::vector<EstimatorId> methods = {EstimatorId::mult_b, EstimatorId::add_g,
                                            EstimatorId::add_w, EstimatorId::add_s};
  const auto grid = default_ratio_grid();
  double worst[3] = {0.0, 0.0, 0.0};
  for (DataFamily family : {DataFamily::normal, DataFamily::lognormal}) {
    const auto cells =
        sweep_ratio(cell(family, VarianceLevel::high, 0.0, 20, methods), grid);
    for (std::size_t i = 0; i < cells.size(); i += methods.size()) {
      const double base = cells[i].mean_deviation;
      for (std::size_t j = 1; j < methods.size(); ++j) {
        worst[j - 1] =
            std::max(worst[j - 1], std::fabs(cells[i + j].mean_deviation - base) / base);
      }
    }
  }
  const bool pass = worst[0] <= 0.02 && worst[1] <= 0.02 && worst[2] <= 0.02;
  return {pass, fmt("max relative gap to mult_b: add_g %.4f, add_w %.4f, add_s %.4f", worst[0],
                    worst[1], worst[2])};
}

// 8. Centered Bernoulli beats mult_b at |r| = 2.
Outcome centered_variant() {
  bool pass = true;
  std::string detail;
  for (DataFamily family : {DataFamily::normal, DataFamily::lognormal}) {
    for (double r : {-2.0, 2.0}) {
      const auto cells = summarize_experiment(cell(family, VarianceLevel::low, r, 20,
                                                   {EstimatorId::mult_b, EstimatorId::mult_bc}));
      const double b = mean_deviation(cells, EstimatorId::mult_b);
      const double bc = mean_deviation(cells, EstimatorId::mult_bc);
      pass = pass && bc < b;
      detail += std::string(to_string(family)) + fmt(" r=%+.0f: bc %.4f vs b %.4f; ", r, bc, b);
    }
  }
  return {pass, detail};
}

double quantile(std::vector<double> values, double level) {
  std::sort(values.begin(), values.end());
  const auto idx = static_cast<std::size_t>(std::ceil(level * values.size())) - 1;
  return values[std::min(idx, values.size() - 1)];
}

// 9. mom and mest bounds hold at the 1 - 2 delta empirical quantile.
Outcome baseline_sanity() {
  const std::vector<EstimatorId> methods = {EstimatorId::mom, EstimatorId::mest};
  const auto config = cell(DataFamily::normal, VarianceLevel::low, 1.0, 100, methods);
  const auto truth = population_moments(config.model);
  const double var = truth.variance;
  const double log_inv = std::log(100.0);
  const double mom_eps = 2.0 * std::sqrt(2.0 * std::exp(1.0)) * std::sqrt(var * (1.0 + log_inv) / 100.0);
  const double mest_eps = 2.0 * std::sqrt(2.0 * var * log_inv / 100.0);

  std::vector<double> devs[2];
  std::size_t slot = 0;
  run_experiment(config, [&](const DeviationRecord& r) {
    devs[slot++ % 2].push_back(r.deviation.value_or(INFINITY));
  });
  const double q_mom = quantile(devs[0], 0.98);
  const double q_mest = quantile(devs[1], 0.98);
  const bool pass = q_mom <= mom_eps && q_mest <= mest_eps;
  return {pass, fmt("mom q98 %.4f <= %.4f; ", q_mom, mom_eps) +
                    fmt("mest q98 %.4f <= %.4f", q_mest, mest_eps)};
}

// 10. Sweeps and dumps rerun byte-identically.
Outcome determinism() {
  auto render = [](unsigned workers) {
    std::ostringstream os;
    ExperimentConfig base;
    base.label = "sweep";
    base.model = {DataFamily::lognormal, VarianceLevel::mid, 1.0};
    base.trials = 500;
    base.seed = kSeed;
    base.workers = workers;
    write_sweep_csv(os, sweep_ratio(base, default_ratio_grid()));
    write_sweep_csv(os, sweep_n(base, default_n_grid()));
    write_dump_header(os);
    run_experiment(base, [&](const DeviationRecord& r) { write_dump_row(os, r); });
    return os.str();
  };
  const std::string first = render(1);
  const bool pass = first == render(1) && first == render(4);
  return {pass, fmt("%.0f bytes identical across reruns and worker counts",
                    static_cast<double>(first.size()))};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria = {
      {1, "kernel oracle suite", kernel_oracles, 120.0},
      {2, "truncation envelope", truncation_envelope, 1.0},
      {3, "moment limits", moment_limits, 1.0},
      {4, "Student identities", student_identities, 60.0},
      {5, "bound coverage", coverage, 300.0},
      {6, "sensitivity ordering", sensitivity_ordering, 180.0},
      {7, "high-variance collapse", high_variance_collapse, 300.0},
      {8, "centered variant", centered_variant, INFINITY},
      {9, "baseline sanity", baseline_sanity, INFINITY},
      {10, "determinism", determinism, INFINITY},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = c.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += fmt(" [over the %.0f s budget]", c.budget_seconds);
    }
    if (!outcome.pass) ++failures;
    std::printf("%s %2d %-24s %7.2f s  %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
