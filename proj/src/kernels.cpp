#include "smoothmean/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smoothmean/soft_trunc.hpp"
#include "smoothmean/specfn.hpp"

namespace smoothmean {
namespace {

using specfn::kPi;
using specfn::kSqrt2;

// Beyond this magnitude u^3 times a vanishing density factor is evaluated as
// its limit instead of inf * 0.
constexpr double kHugeArgument = 1e100;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_degree(int k) {
  if (k < 0 || k > 3) throw std::domain_error("moment degree must be in 0..3");
}

// E[W 1{W <= u}] for W ~ Student(dof), with A the normalizer at dof.
double student_first_partial(double u, double dof, double norm) {
  return -dof / (dof - 1.0) * norm * std::exp(-0.5 * (dof - 1.0) * std::log1p(u * u / dof));
}

}  // namespace

void validate(const KernelFamily& family) {
  std::visit(Overloaded{
                 [](const Normal01&) {},
                 [](const Weibull& w) {
                   if (!(w.shape > 0.0) || !(w.scale > 0.0) || !std::isfinite(w.shape) ||
                       !std::isfinite(w.scale)) {
                     throw std::domain_error("Weibull kernel needs shape > 0 and scale > 0");
                   }
                 },
                 [](const Student& s) {
                   if (!(s.dof > 5.0) || !std::isfinite(s.dof)) {
                     throw std::domain_error("Student kernel needs dof > 5");
                   }
                 },
             },
             family);
}

SmoothedKernel::SmoothedKernel(KernelFamily family) : family_(family) {
  validate(family_);
  std::visit(Overloaded{
                 [&](const Normal01&) { raw_ = {1.0, 0.0, 1.0, 0.0}; },
                 [&](const Weibull& w) {
                   for (int l = 0; l <= 3; ++l) {
                     raw_[l] = std::pow(w.scale, l) * specfn::gamma_fn(1.0 + l / w.shape);
                   }
                 },
                 [&](const Student& s) {
                   raw_ = {1.0, 0.0, s.dof / (s.dof - 2.0), 0.0};
                   student_norm_ = specfn::student_normalizer(s.dof);
                   student_norm_lower_ = specfn::student_normalizer(s.dof - 2.0);
                 },
             },
             family_);
}

double SmoothedKernel::raw_moment(int k) const {
  check_degree(k);
  return raw_[k];
}

std::array<double, 4> SmoothedKernel::base_moments(double u) const {
  if (std::isnan(u)) throw std::domain_error("moment indicator evaluated at NaN");
  if (u >= kHugeArgument) return raw_;
  if (u <= -kHugeArgument) return {0.0, 0.0, 0.0, 0.0};

  return std::visit(
      Overloaded{
          [&](const Normal01&) -> std::array<double, 4> {
            const double m0 = specfn::normal_cdf(u);
            const double m1 = -std::exp(-0.5 * u * u) / std::sqrt(2.0 * kPi);
            return {m0, m1, m0 + u * m1, (u * u + 2.0) * m1};
          },
          [&](const Weibull& w) -> std::array<double, 4> {
            if (u <= 0.0) return {0.0, 0.0, 0.0, 0.0};
            const double x = std::pow(u / w.scale, w.shape);
            const double survival = std::exp(-x);
            std::array<double, 4> m{};
            m[0] = -std::expm1(-x);
            double u_pow = 1.0;
            for (int l = 1; l <= 3; ++l) {
              u_pow *= u;
              const double incomplete =
                  x > 0.0 ? specfn::lower_incomplete_gamma(l / w.shape, x) : 0.0;
              m[l] = l * std::pow(w.scale, l) / w.shape * incomplete - u_pow * survival;
            }
            return m;
          },
          [&](const Student& s) -> std::array<double, 4> {
            const double nu = s.dof;
            const double a_nu = student_norm_;
            const double a_lower = student_norm_lower_;
            const double tail = std::exp(-0.5 * (nu - 1.0) * std::log1p(u * u / nu));
            const double lead = nu / (nu - 1.0) * a_nu;
            const double shrunk = u * std::sqrt((nu - 2.0) / nu);
            const double n0_lower = specfn::student_cdf(shrunk, nu - 2.0);
            const double n1_lower = student_first_partial(shrunk, nu - 2.0, a_lower);
            std::array<double, 4> m{};
            m[0] = specfn::student_cdf(u, nu);
            m[1] = -lead * tail;
            m[2] = std::pow(nu, 1.5) / (std::sqrt(nu - 2.0) * (nu - 1.0)) * (a_nu / a_lower) *
                       n0_lower -
                   lead * u * tail;
            m[3] = 2.0 * nu * nu / ((nu - 2.0) * (nu - 1.0)) * (a_nu / a_lower) * n1_lower -
                   lead * u * u * tail;
            return m;
          },
      },
      family_);
}

double SmoothedKernel::base_moment_indicator(int k, double u) const {
  check_degree(k);
  return base_moments(u)[k];
}

std::array<double, 4> SmoothedKernel::shifted_moments(ShiftScale pair, double u) const {
  if (pair.scale == 0.0) {
    throw std::invalid_argument("shifted moment indicator requires a nonzero scale");
  }
  const double t = (u - pair.shift) / pair.scale;
  std::array<double, 4> m = base_moments(t);
  if (pair.scale < 0.0) {
    for (int k = 0; k <= 3; ++k) m[k] = raw_[k] - m[k];
  }
  return m;
}

double SmoothedKernel::shifted_moment_indicator(int k, ShiftScale pair, double u) const {
  check_degree(k);
  return shifted_moments(pair, u)[k];
}

double SmoothedKernel::d_term(int k, ShiftScale pair, double u) const {
  check_degree(k);
  return shifted_moments(pair, u)[k] - shifted_moments(pair, -u)[k];
}

double SmoothedKernel::smoothed_trunc(ShiftScale pair) const {
  const double a = pair.shift;
  const double b = pair.scale;
  if (b == 0.0) return soft_trunc(a);

  const std::array<double, 4> upper = shifted_moments(pair, kSqrt2);
  const std::array<double, 4> lower = shifted_moments(pair, -kSqrt2);
  const double d1 = upper[1] - lower[1];
  const double d2 = upper[2] - lower[2];
  const double d3 = upper[3] - lower[3];

  const double cubic = a - a * a * a / 6.0;
  const double f0 = kTruncCeiling + upper[0] * (cubic - kTruncCeiling) -
                    lower[0] * (cubic + kTruncCeiling);
  const double f3 = (0.5 * a * a - 1.0) * b * d1 + 0.5 * a * b * b * d2 + b * b * b / 6.0 * d3;
  return std::clamp(f0 - f3, -kTruncCeiling, kTruncCeiling);
}

double raw_moment(const KernelFamily& family, int k) {
  return SmoothedKernel(family).raw_moment(k);
}

double base_moment_indicator(const KernelFamily& family, int k, double u) {
  return SmoothedKernel(family).base_moment_indicator(k, u);
}

double shifted_moment_indicator(const KernelFamily& family, int k, ShiftScale pair, double u) {
  return SmoothedKernel(family).shifted_moment_indicator(k, pair, u);
}

double d_term(const KernelFamily& family, int k, ShiftScale pair, double u) {
  return SmoothedKernel(family).d_term(k, pair, u);
}

double smoothed_trunc(const KernelFamily& family, ShiftScale pair) {
  return SmoothedKernel(family).smoothed_trunc(pair);
}

}  // namespace smoothmean
