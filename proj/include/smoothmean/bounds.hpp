#pragma once

#include <cstddef>
#include <optional>
#include <variant>

#include "smoothmean/estimators.hpp"
#include "smoothmean/kernels.hpp"

namespace smoothmean {

// Noise ("posterior") / prior pairs entering the relative-entropy term.

struct BernoulliNoise {
  double theta = 0.5;
  double prior_theta = 0.5;
};

struct NormalNoise {
  double mean = 0.0;
  double variance = 1.0;
  double prior_mean = 1.0;
  double prior_variance = 1.0;
};

struct WeibullNoise {
  Weibull noise;
  Weibull prior;
};

/// Student(dof) shifted by `shift` against the unshifted Student(dof). Only
/// an upper bound on this divergence is available in closed form.
struct StudentShiftNoise {
  double dof = 5.1;
  double shift = 1.0;
};

using NoiseSpec = std::variant<BernoulliNoise, NormalNoise, WeibullNoise, StudentShiftNoise>;

struct KlValue {
  double value = 0.0;
  bool is_upper_bound = false;
};

KlValue kl(const NoiseSpec& noise);

double bernoulli_kl(double theta, double prior_theta = 0.5);
double normal_kl(const NormalNoise& noise);
double weibull_kl(const Weibull& noise, const Weibull& prior);

/// KL(Weibull(k, 1/Gamma(1+1/k)); Weibull(k, 1)) = Gamma(1+1/k)^-k + k log Gamma(1+1/k) - 1.
double weibull_mult_constant(double shape);

/// (dof+1)/2 * (log(1 + shift^2/dof) + 2 |shift| E|W| / dof), W ~ Student(dof).
double student_kl_bound(double shift, double dof);

/// E|W| for W ~ Student(dof), dof > 1.
double student_abs_mean(double dof);

/// Two-sided deviation of the Bernoulli-noise truncated mean at scale s:
/// m2 / (2 s) + s / (n theta) * (KL(theta; 1/2) + log(1/delta)).
double bernoulli_deviation(double theta, double scale, std::size_t n, double second_moment,
                           double delta);

/// The noise/prior pair a smoothed method is analysed with; empty for
/// methods without a relative-entropy term.
std::optional<NoiseSpec> noise_for(const EstimatorConfig& config, const MomentInfo& moments);

struct BoundReport {
  EstimatorId method = EstimatorId::mean;
  /// Half-width of the two-sided 1 - 2 delta interval.
  double epsilon = 0.0;
  std::optional<double> kl;
  bool kl_is_upper_bound = false;
  std::optional<double> scale_used;
};

/// Throws std::invalid_argument for methods without a bound (mean, med).
BoundReport deviation_bound(const EstimatorConfig& config, const MomentInfo& moments);

}  // namespace smoothmean
