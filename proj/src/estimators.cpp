#include "smoothmean/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "smoothmean/bounds.hpp"
#include "smoothmean/kernels.hpp"
#include "smoothmean/soft_trunc.hpp"
#include "smoothmean/specfn.hpp"

namespace smoothmean {
namespace {

using specfn::kPi;

constexpr std::array<std::string_view, 12> kNames = {
    "mean", "med",    "mom",    "mest",  "mult_b", "mult_bc",
    "mult_g", "mult_w", "mult_s", "add_g", "add_w",  "add_s"};

double log_inv_delta(double delta) { return -std::log(delta); }

double checked_sqrt(double s2, EstimatorId id) {
  if (!(s2 > 0.0) || !std::isfinite(s2)) {
    throw DegenerateScaleError("degenerate scale for " + std::string(to_string(id)));
  }
  return std::sqrt(s2);
}

void require_nonempty(std::span<const double> xs) {
  if (xs.empty()) throw EmptySampleError("estimator called on an empty sample");
}

// (s/n) sum_i E psi(a_i + b_i W) with (a_i, b_i) produced per datum.
template <class PairFn>
double smoothed_mean(const SmoothedKernel& kernel, std::span<const double> xs, double s,
                     PairFn&& pair_for) {
  double acc = 0.0;
  for (double x : xs) acc += kernel.smoothed_trunc(pair_for(x));
  return s * acc / static_cast<double>(xs.size());
}

double smoothed_estimate(const EstimatorConfig& config, std::span<const double> xs,
                         const MomentInfo& moments, double s) {
  const double n = static_cast<double>(xs.size());
  switch (config.id) {
    case EstimatorId::mult_b:
      return truncated_mean(xs, s);
    case EstimatorId::mult_g: {
      // Noise N(1, 1/beta), beta^2 = n m2 / s^2.
      const double beta = std::sqrt(n * moments.second_moment) / s;
      const double spread = 1.0 / (s * std::sqrt(beta));
      return smoothed_mean(SmoothedKernel(Normal01{}), xs, s, [&](double x) {
        return ShiftScale{x / s, std::fabs(x) * spread};
      });
    }
    case EstimatorId::add_g: {
      // Noise N(0, 1/beta), beta^2 = n / s^2.
      const double beta = std::sqrt(n) / s;
      const double spread = 1.0 / (s * std::sqrt(beta));
      return smoothed_mean(SmoothedKernel(Normal01{}), xs, s,
                           [&](double x) { return ShiftScale{x / s, spread}; });
    }
    case EstimatorId::mult_w: {
      const double k = config.weibull_shape;
      const SmoothedKernel kernel(Weibull{k, 1.0 / specfn::gamma_fn(1.0 + 1.0 / k)});
      return smoothed_mean(kernel, xs, s, [&](double x) { return ShiftScale{0.0, x / s}; });
    }
    case EstimatorId::add_w: {
      const double sigma = config.weibull_scale;
      const double centre = sigma * std::sqrt(kPi) / 2.0;
      const SmoothedKernel kernel(Weibull{2.0, sigma});
      return smoothed_mean(kernel, xs, s,
                           [&](double x) { return ShiftScale{(x - centre) / s, 1.0 / s}; });
    }
    case EstimatorId::mult_s: {
      const double alpha = config.student_shift;
      const SmoothedKernel kernel(Student{config.student_dof});
      return smoothed_mean(kernel, xs, s, [&](double x) {
        return ShiftScale{alpha * x / s, std::fabs(x) / s};
      });
    }
    case EstimatorId::add_s: {
      const SmoothedKernel kernel(Student{config.student_dof});
      return smoothed_mean(kernel, xs, s, [&](double x) { return ShiftScale{x / s, 1.0 / s}; });
    }
    default:
      throw std::invalid_argument("not a single-scale smoothed estimator: " +
                                  std::string(to_string(config.id)));
  }
}

// Ancillary truncated mean on the first m points, then the Bernoulli
// estimator on the re-centred remainder scaled by var + eps_m^2.
double centered_bernoulli(const EstimatorConfig& config, std::span<const double> xs,
                          const MomentInfo& moments) {
  const std::size_t n = xs.size();
  const std::size_t m = split_size(config, n);
  const double log_inv = log_inv_delta(moments.delta);

  const double s_first = scale_for(config, moments);
  const double anchor = truncated_mean(xs.first(m), s_first);

  const double theta = bernoulli_theta(config, moments.delta);
  const double eps_m =
      bernoulli_deviation(theta, s_first, m, moments.second_moment, moments.delta);
  const double m2_shifted = moments.variance + eps_m * eps_m;
  const std::size_t rest = n - m;
  const double s_second =
      checked_sqrt(static_cast<double>(rest) * m2_shifted / (2.0 * log_inv), config.id);

  double acc = 0.0;
  for (double x : xs.subspan(m)) acc += soft_trunc((x - anchor) / s_second);
  return s_second * acc / static_cast<double>(rest) + anchor;
}

}  // namespace

std::string_view to_string(EstimatorId id) { return kNames[static_cast<std::size_t>(id)]; }

std::optional<EstimatorId> parse_estimator(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return kAllEstimators[i];
  }
  return std::nullopt;
}

bool is_smoothed(EstimatorId id) {
  switch (id) {
    case EstimatorId::mult_b:
    case EstimatorId::mult_g:
    case EstimatorId::mult_w:
    case EstimatorId::mult_s:
    case EstimatorId::add_g:
    case EstimatorId::add_w:
    case EstimatorId::add_s:
      return true;
    default:
      return false;
  }
}

bool has_bound(EstimatorId id) { return id != EstimatorId::mean && id != EstimatorId::med; }

void validate(const MomentInfo& moments) {
  if (moments.n == 0) throw EmptySampleError("sample size must be positive");
  if (!(moments.delta > 0.0 && moments.delta < 0.5)) {
    throw std::domain_error("delta must lie in (0, 1/2)");
  }
  if (!(moments.second_moment >= 0.0) || !(moments.variance >= 0.0) ||
      !std::isfinite(moments.second_moment) || !std::isfinite(moments.variance)) {
    throw std::domain_error("moments must be finite and nonnegative");
  }
}

double default_bernoulli_theta(double delta) {
  const double log_inv = log_inv_delta(delta);
  double best_theta = 0.5;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 99; ++i) {
    const double theta = i / 100.0;
    const double value = (bernoulli_kl(theta) + log_inv) / theta;
    if (value < best) {
      best = value;
      best_theta = theta;
    }
  }
  return best_theta;
}

double bernoulli_theta(const EstimatorConfig& config, double delta) {
  if (config.bernoulli_theta) {
    const double theta = *config.bernoulli_theta;
    if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in (0, 1)");
    return theta;
  }
  return default_bernoulli_theta(delta);
}

std::size_t split_size(const EstimatorConfig& config, std::size_t n) {
  if (n < 2) throw std::invalid_argument("mult_bc needs at least two observations");
  const std::size_t m = config.split_m.value_or(n / 2);
  if (m == 0 || m >= n) throw std::invalid_argument("mult_bc split must satisfy 0 < m < n");
  return m;
}

double scale_for(const EstimatorConfig& config, const MomentInfo& moments) {
  validate(moments);
  const double n = static_cast<double>(moments.n);
  const double m2 = moments.second_moment;
  const double log_inv = log_inv_delta(moments.delta);
  const EstimatorId id = config.id;

  switch (id) {
    case EstimatorId::mult_b:
    case EstimatorId::mult_g:
    case EstimatorId::add_g:
      return checked_sqrt(n * m2 / (2.0 * log_inv), id);
    case EstimatorId::mult_bc: {
      const double m = static_cast<double>(split_size(config, moments.n));
      return checked_sqrt(m * m2 / (2.0 * log_inv), id);
    }
    case EstimatorId::mult_w: {
      const double k = config.weibull_shape;
      const double g1 = specfn::gamma_fn(1.0 + 1.0 / k);
      const double g2 = specfn::gamma_fn(1.0 + 2.0 / k);
      return checked_sqrt(
          n * g2 * m2 / (2.0 * g1 * g1 * (weibull_mult_constant(k) + log_inv)), id);
    }
    case EstimatorId::add_w: {
      const double sigma = config.weibull_scale;
      if (!(sigma > 0.0)) throw std::domain_error("add_w needs a positive Weibull scale");
      return checked_sqrt(n * (m2 + sigma * sigma * (1.0 - kPi / 4.0)) / (2.0 * log_inv), id);
    }
    case EstimatorId::mult_s: {
      const double nu = config.student_dof;
      const double alpha = config.student_shift;
      const double c = student_kl_bound(alpha, nu);
      return checked_sqrt(
          n * (alpha * alpha * (nu - 2.0) + nu) * m2 / (2.0 * (nu - 2.0) * (c + log_inv)), id);
    }
    case EstimatorId::add_s: {
      const double nu = config.student_dof;
      const double c = student_kl_bound(config.student_shift, nu);
      return checked_sqrt(n * (m2 + nu / (nu - 2.0)) / (2.0 * (c + log_inv)), id);
    }
    case EstimatorId::mest:
      return checked_sqrt(2.0 * n * moments.variance / log_inv, id);
    default:
      throw std::invalid_argument(std::string(to_string(id)) + " has no scale parameter");
  }
}

double estimate(const EstimatorConfig& config, std::span<const double> xs,
                const MomentInfo& moments) {
  require_nonempty(xs);
  validate(moments);
  if (moments.n != xs.size()) {
    throw std::invalid_argument("moment info sample size does not match the sample");
  }
  switch (config.id) {
    case EstimatorId::mean:
      return sample_mean(xs);
    case EstimatorId::med:
      return sample_median(xs);
    case EstimatorId::mom:
      return median_of_means(xs, moments.delta);
    case EstimatorId::mest:
      return m_estimate(xs, scale_for(config, moments));
    case EstimatorId::mult_bc:
      if (moments.second_moment == 0.0) return 0.0;
      return centered_bernoulli(config, xs, moments);
    default:
      if (moments.second_moment == 0.0) return 0.0;
      return smoothed_estimate(config, xs, moments, scale_for(config, moments));
  }
}

double estimate_at_scale(const EstimatorConfig& config, std::span<const double> xs,
                         const MomentInfo& moments, double scale) {
  require_nonempty(xs);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DegenerateScaleError("explicit scale must be positive and finite");
  }
  if (config.id == EstimatorId::mest) return m_estimate(xs, scale);
  return smoothed_estimate(config, xs, moments, scale);
}

double sample_mean(std::span<const double> xs) {
  require_nonempty(xs);
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_median(std::span<const double> xs) {
  require_nonempty(xs);
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

double median_of_means(std::span<const double> xs, double delta) {
  require_nonempty(xs);
  const std::size_t n = xs.size();
  if (delta <= std::exp(1.0 - static_cast<double>(n) / 2.0)) return sample_mean(xs);

  const auto blocks = static_cast<std::size_t>(std::ceil(log_inv_delta(delta)));
  if (blocks <= 1) return sample_mean(xs);
  const std::size_t width = n / blocks;

  // Contiguous blocks of `width`; the n mod k leftovers go one per block
  // starting from the first block.
  std::vector<double> sums(blocks, 0.0);
  std::vector<std::size_t> counts(blocks, width);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t i = b * width; i < (b + 1) * width; ++i) sums[b] += xs[i];
  }
  for (std::size_t i = blocks * width, b = 0; i < n; ++i, ++b) {
    sums[b] += xs[i];
    ++counts[b];
  }
  std::vector<double> means(blocks);
  for (std::size_t b = 0; b < blocks; ++b) means[b] = sums[b] / static_cast<double>(counts[b]);
  return sample_median(means);
}

double m_estimate(std::span<const double> xs, double scale) {
  require_nonempty(xs);
  if (!(scale > 0.0)) throw DegenerateScaleError("M-estimator scale must be positive");
  const auto [min_it, max_it] = std::minmax_element(xs.begin(), xs.end());
  double lo = *min_it - scale;
  double hi = *max_it + scale;

  // Decreasing in theta; positive at lo, negative at hi.
  auto score = [&](double theta) {
    double acc = 0.0;
    for (double x : xs) acc += specfn::gudermannian((x - theta) / scale);
    return acc;
  };

  const double tol = 1e-12 * (1.0 + std::max(std::fabs(lo), std::fabs(hi)));
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double value = score(mid);
    if (value == 0.0) return mid;
    if (value > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double truncated_mean(std::span<const double> xs, double scale) {
  require_nonempty(xs);
  double acc = 0.0;
  for (double x : xs) acc += soft_trunc(x / scale);
  return scale * acc / static_cast<double>(xs.size());
}

}  // namespace smoothmean
