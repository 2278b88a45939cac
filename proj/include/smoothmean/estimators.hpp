#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

namespace smoothmean {

/// The twelve location estimators compared in the simulation study.
enum class EstimatorId {
  mean,
  med,
  mom,
  mest,
  mult_b,
  mult_bc,
  mult_g,
  mult_w,
  mult_s,
  add_g,
  add_w,
  add_s,
};

inline constexpr std::array<EstimatorId, 12> kAllEstimators = {
    EstimatorId::mean,   EstimatorId::med,    EstimatorId::mom,    EstimatorId::mest,
    EstimatorId::mult_b, EstimatorId::mult_bc, EstimatorId::mult_g, EstimatorId::mult_w,
    EstimatorId::mult_s, EstimatorId::add_g,  EstimatorId::add_w,  EstimatorId::add_s};

std::string_view to_string(EstimatorId id);
std::optional<EstimatorId> parse_estimator(std::string_view name);

/// True for the mult_* / add_* family: (s/n) sum E psi(a_i + b_i W).
bool is_smoothed(EstimatorId id);

/// True when a closed-form deviation bound is available (everything except
/// mean and med).
bool has_bound(EstimatorId id);

/// Population quantities used for scaling. The caller supplies true values.
struct MomentInfo {
  double second_moment = 0.0;
  double variance = 0.0;
  std::size_t n = 0;
  double delta = 0.01;
};

struct EstimatorConfig {
  EstimatorId id = EstimatorId::mean;
  /// Bernoulli retention probability. Unset: grid minimizer of the bound
  /// constant, see default_bernoulli_theta().
  std::optional<double> bernoulli_theta;
  /// First-stage size for mult_bc. Unset: floor(n / 2).
  std::optional<std::size_t> split_m;
  /// Weibull shape for mult_w (its scale is 1 / Gamma(1 + 1/k)).
  double weibull_shape = 2.0;
  /// Weibull scale for add_w (shape fixed at 2).
  double weibull_scale = 1.0;
  double student_dof = 5.1;
  double student_shift = 1.0;
};

class EmptySampleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateScaleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Throws std::invalid_argument / std::domain_error on bad moment info.
void validate(const MomentInfo& moments);

/// theta in {0.01, ..., 0.99} minimizing (KL(theta; 1/2) + log(1/delta)) / theta.
double default_bernoulli_theta(double delta);

double bernoulli_theta(const EstimatorConfig& config, double delta);

/// mult_bc split size for a sample of n points.
std::size_t split_size(const EstimatorConfig& config, std::size_t n);

/// Scale s > 0 used by the method. For mult_bc this is the first-stage scale
/// on the m-point ancillary sample. Throws DegenerateScaleError when s = 0.
double scale_for(const EstimatorConfig& config, const MomentInfo& moments);

/// Point estimate. moments.n must equal xs.size().
double estimate(const EstimatorConfig& config, std::span<const double> xs,
                const MomentInfo& moments);

/// Smoothed estimators (and mest) evaluated at an explicit scale instead of
/// scale_for. Noise parameters that the method ties to s follow the given s.
double estimate_at_scale(const EstimatorConfig& config, std::span<const double> xs,
                         const MomentInfo& moments, double scale);

// Building blocks, exposed for tests and reuse.
double sample_mean(std::span<const double> xs);
double sample_median(std::span<const double> xs);
double median_of_means(std::span<const double> xs, double delta);
double m_estimate(std::span<const double> xs, double scale);
double truncated_mean(std::span<const double> xs, double scale);

}  // namespace smoothmean
