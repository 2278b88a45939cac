#include "smoothmean/specfn.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace smoothmean::specfn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

void require_positive(double u, const char* what) {
  if (!(u > 0.0)) {
    throw std::domain_error(std::string(what) + ": argument must be positive");
  }
}

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Continued fraction for the upper incomplete gamma (modified Lentz).
double upper_gamma_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Power series sum_{n>=0} x^n / (a (a+1) ... (a+n)).
double lower_gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum;
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// I_x(a, b) with y = 1 - x supplied separately so callers can avoid
// cancellation when x is close to 1.
double incomplete_beta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, y) / b;
}

}  // namespace

double normal_cdf(double u) { return 0.5 * std::erfc(-u / kSqrt2); }

double gamma_fn(double u) {
  require_positive(u, "gamma_fn");
  return std::tgamma(u);
}

double log_gamma(double u) {
  require_positive(u, "log_gamma");
  if (u < 0.5) {
    // Reflection; sin(pi u) > 0 on (0, 1/2).
    return std::log(kPi / std::sin(kPi * u)) - log_gamma(1.0 - u);
  }
  const double x = u - 1.0;
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    acc += kLanczos[i] / (x + static_cast<double>(i));
  }
  const double t = x + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(acc);
}

double digamma(double u) {
  require_positive(u, "digamma");
  double result = 0.0;
  while (u < 6.0) {
    result -= 1.0 / u;
    u += 1.0;
  }
  const double inv = 1.0 / u;
  const double inv2 = inv * inv;
  // Asymptotic expansion with Bernoulli-number coefficients.
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760 - inv2 / 12.0))))));
  return result + std::log(u) - 0.5 * inv - series;
}

double regularized_lower_gamma(double shape, double x) {
  if (!(shape > 0.0) || !(x >= 0.0)) {
    throw std::domain_error("regularized_lower_gamma: need shape > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_front = -x + shape * std::log(x) - log_gamma(shape);
  if (x < shape + 1.0) {
    return std::exp(log_front) * lower_gamma_series(shape, x);
  }
  return 1.0 - std::exp(log_front) * upper_gamma_cf(shape, x);
}

double lower_incomplete_gamma(double shape, double x) {
  if (!(shape > 0.0) || !(x >= 0.0)) {
    throw std::domain_error("lower_incomplete_gamma: need shape > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  const double full = gamma_fn(shape);
  if (std::isinf(x)) return full;
  const double log_front = -x + shape * std::log(x);
  if (x < shape + 1.0) {
    return std::exp(log_front) * lower_gamma_series(shape, x);
  }
  return full - std::exp(log_front) * upper_gamma_cf(shape, x);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("regularized_incomplete_beta: need a, b > 0 and x in [0, 1]");
  }
  return incomplete_beta(a, b, x, 1.0 - x);
}

double student_cdf(double u, double dof) {
  if (!(dof > 0.0)) throw std::domain_error("student_cdf: dof must be positive");
  if (u == 0.0) return 0.5;
  if (std::isinf(u)) return u > 0.0 ? 1.0 : 0.0;
  const double u2 = u * u;
  const double denom = dof + u2;
  // Two-sided tail mass P(|T| > |u|) = I_{dof/(dof+u^2)}(dof/2, 1/2).
  const double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, dof / denom, u2 / denom);
  return u > 0.0 ? 1.0 - tail : tail;
}

double student_normalizer(double dof) {
  require_positive(dof, "student_normalizer");
  return std::exp(log_gamma(0.5 * (dof + 1.0)) - log_gamma(0.5 * dof) -
                  0.5 * std::log(dof * kPi));
}

double gudermannian(double u) { return 2.0 * std::atan(std::tanh(0.5 * u)); }

}  // namespace smoothmean::specfn
