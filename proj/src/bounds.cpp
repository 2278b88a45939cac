#include "smoothmean/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "smoothmean/specfn.hpp"

namespace smoothmean {
namespace {

using specfn::kPi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// x log(x / y) with the 0 log 0 = 0 convention.
double xlogy_ratio(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); }

double mom_constant() { return 2.0 * std::sqrt(2.0 * std::exp(1.0)); }

}  // namespace

double bernoulli_kl(double theta, double prior_theta) {
  if (!(theta >= 0.0 && theta <= 1.0) || !(prior_theta > 0.0 && prior_theta < 1.0)) {
    throw std::domain_error("Bernoulli KL needs theta in [0, 1] and prior in (0, 1)");
  }
  return xlogy_ratio(theta, prior_theta) + xlogy_ratio(1.0 - theta, 1.0 - prior_theta);
}

double normal_kl(const NormalNoise& noise) {
  if (!(noise.variance > 0.0) || !(noise.prior_variance > 0.0)) {
    throw std::domain_error("Normal KL needs positive variances");
  }
  const double diff = noise.mean - noise.prior_mean;
  return 0.5 * std::log(noise.prior_variance / noise.variance) +
         (noise.variance + diff * diff) / (2.0 * noise.prior_variance) - 0.5;
}

double weibull_kl(const Weibull& noise, const Weibull& prior) {
  validate(KernelFamily{noise});
  validate(KernelFamily{prior});
  const double k1 = noise.shape;
  const double s1 = noise.scale;
  const double k2 = prior.shape;
  const double s2 = prior.scale;
  return std::log(k1) - k1 * std::log(s1) - std::log(k2) + k2 * std::log(s2) +
         (k1 - k2) * (std::log(s1) - specfn::kEulerGamma / k1) +
         std::pow(s1 / s2, k2) * specfn::gamma_fn(k2 / k1 + 1.0) - 1.0;
}

double weibull_mult_constant(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("Weibull shape must be positive");
  const double g = specfn::gamma_fn(1.0 + 1.0 / shape);
  return std::pow(g, -shape) + shape * std::log(g) - 1.0;
}

double student_abs_mean(double dof) {
  if (!(dof > 1.0)) throw std::domain_error("E|W| needs dof > 1");
  return 2.0 * std::sqrt(dof) / (std::sqrt(kPi) * (dof - 1.0)) *
         std::exp(specfn::log_gamma(0.5 * (dof + 1.0)) - specfn::log_gamma(0.5 * dof));
}

double student_kl_bound(double shift, double dof) {
  if (!(dof > 1.0)) throw std::domain_error("Student KL bound needs dof > 1");
  return 0.5 * (dof + 1.0) *
         (std::log1p(shift * shift / dof) + 2.0 * std::fabs(shift) * student_abs_mean(dof) / dof);
}

KlValue kl(const NoiseSpec& noise) {
  return std::visit(
      Overloaded{
          [](const BernoulliNoise& b) { return KlValue{bernoulli_kl(b.theta, b.prior_theta)}; },
          [](const NormalNoise& g) { return KlValue{normal_kl(g)}; },
          [](const WeibullNoise& w) { return KlValue{weibull_kl(w.noise, w.prior)}; },
          [](const StudentShiftNoise& s) {
            return KlValue{student_kl_bound(s.shift, s.dof), true};
          },
      },
      noise);
}

double bernoulli_deviation(double theta, double scale, std::size_t n, double second_moment,
                           double delta) {
  return second_moment / (2.0 * scale) +
         scale / (static_cast<double>(n) * theta) * (bernoulli_kl(theta) - std::log(delta));
}

std::optional<NoiseSpec> noise_for(const EstimatorConfig& config, const MomentInfo& moments) {
  const double n = static_cast<double>(moments.n);
  switch (config.id) {
    case EstimatorId::mult_b:
    case EstimatorId::mult_bc:
      return BernoulliNoise{bernoulli_theta(config, moments.delta), 0.5};
    case EstimatorId::mult_g: {
      const double s = scale_for(config, moments);
      const double beta = std::sqrt(n * moments.second_moment) / s;
      return NormalNoise{1.0, 1.0 / beta, 2.0, 1.0 / beta};
    }
    case EstimatorId::add_g: {
      const double s = scale_for(config, moments);
      const double beta = std::sqrt(n) / s;
      return NormalNoise{0.0, 1.0 / beta, 1.0, 1.0 / beta};
    }
    case EstimatorId::mult_w: {
      const double k = config.weibull_shape;
      return WeibullNoise{Weibull{k, 1.0 / specfn::gamma_fn(1.0 + 1.0 / k)}, Weibull{k, 1.0}};
    }
    case EstimatorId::add_w:
      return WeibullNoise{Weibull{2.0, config.weibull_scale}, Weibull{2.0, config.weibull_scale}};
    case EstimatorId::mult_s:
    case EstimatorId::add_s:
      return StudentShiftNoise{config.student_dof, config.student_shift};
    default:
      return std::nullopt;
  }
}

BoundReport deviation_bound(const EstimatorConfig& config, const MomentInfo& moments) {
  if (!has_bound(config.id)) {
    throw std::invalid_argument(std::string(to_string(config.id)) + " has no deviation bound");
  }
  validate(moments);
  const double n = static_cast<double>(moments.n);
  const double m2 = moments.second_moment;
  const double var = moments.variance;
  const double log_inv = -std::log(moments.delta);

  BoundReport report;
  report.method = config.id;
  if (auto noise = noise_for(config, moments)) {
    const KlValue value = kl(*noise);
    report.kl = value.value;
    report.kl_is_upper_bound = value.is_upper_bound;
  }

  switch (config.id) {
    case EstimatorId::mom: {
      if (moments.delta > std::exp(1.0 - n / 2.0)) {
        report.epsilon = mom_constant() * std::sqrt(var * (1.0 + log_inv) / n);
      } else {
        // Falls back to the sample mean: Chebyshev at level 2 delta.
        report.epsilon = std::sqrt(var / (2.0 * moments.delta * n));
      }
      break;
    }
    case EstimatorId::mest: {
      report.scale_used = scale_for(config, moments);
      report.epsilon = 2.0 * std::sqrt(2.0 * var * log_inv / n);
      break;
    }
    case EstimatorId::mult_b: {
      const double s = scale_for(config, moments);
      report.scale_used = s;
      report.epsilon =
          bernoulli_deviation(bernoulli_theta(config, moments.delta), s, moments.n, m2,
                              moments.delta);
      break;
    }
    case EstimatorId::mult_bc: {
      const double s = scale_for(config, moments);
      const std::size_t m = split_size(config, moments.n);
      const double eps_m =
          bernoulli_deviation(bernoulli_theta(config, moments.delta), s, m, m2, moments.delta);
      report.scale_used = s;
      report.epsilon = std::sqrt(2.0 * (var + eps_m * eps_m) * std::log(2.0 / moments.delta) /
                                 static_cast<double>(moments.n - m));
      break;
    }
    case EstimatorId::mult_g:
      report.scale_used = scale_for(config, moments);
      report.epsilon = std::sqrt(2.0 * m2 * log_inv / n) + std::sqrt(m2 / n);
      break;
    case EstimatorId::add_g:
      report.scale_used = scale_for(config, moments);
      report.epsilon = std::sqrt(2.0 * m2 * log_inv / n) + 1.0 / std::sqrt(n);
      break;
    case EstimatorId::mult_w: {
      const double k = config.weibull_shape;
      const double g1 = specfn::gamma_fn(1.0 + 1.0 / k);
      const double g2 = specfn::gamma_fn(1.0 + 2.0 / k);
      report.scale_used = scale_for(config, moments);
      report.epsilon =
          std::sqrt(2.0 * g2 * m2 * (weibull_mult_constant(k) + log_inv) / (g1 * g1 * n));
      break;
    }
    case EstimatorId::add_w: {
      const double sigma = config.weibull_scale;
      report.scale_used = scale_for(config, moments);
      report.epsilon =
          std::sqrt(2.0 * (m2 + sigma * sigma * (1.0 - kPi / 4.0)) * log_inv / n);
      break;
    }
    case EstimatorId::mult_s: {
      const double nu = config.student_dof;
      const double alpha = config.student_shift;
      const double c = student_kl_bound(alpha, nu);
      report.scale_used = scale_for(config, moments);
      report.epsilon = std::sqrt(2.0 * (alpha * alpha * (nu - 2.0) + nu) * m2 * (c + log_inv) /
                                 ((nu - 2.0) * n));
      break;
    }
    case EstimatorId::add_s: {
      const double nu = config.student_dof;
      const double c = student_kl_bound(config.student_shift, nu);
      report.scale_used = scale_for(config, moments);
      report.epsilon = std::sqrt(2.0 * (m2 + nu / (nu - 2.0)) * (c + log_inv) / n);
      break;
    }
    default:
      break;
  }
  if (!(report.epsilon > 0.0)) {
    throw DegenerateScaleError("deviation bound is zero for " +
                               std::string(to_string(config.id)));
  }
  return report;
}

}  // namespace smoothmean
