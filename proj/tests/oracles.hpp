#pragma once

// Test-only reference computations. Nothing here calls into the library's
// kernels; they are independent routes to the same quantities.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Gauss-Kronrod 7/15 nodes and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline void gk15(const std::function<double(double)>& f, double a, double b, double& result,
                 double& error) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  result = kronrod * half;
  error = std::fabs((kronrod - gauss) * half);
}

inline double adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                       int depth = 0) {
  double result = 0.0;
  double error = 0.0;
  gk15(f, a, b, result, error);
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * std::fabs(result);
  if (error <= std::max(tol, floor) || depth > 40 || b - a < 1e-12 * (1.0 + std::fabs(a))) {
    return result;
  }
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * tol, depth + 1) + adaptive(f, mid, b, 0.5 * tol, depth + 1);
}

/// Integral of f over [a, b]; either end may be infinite.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return adaptive(f, a, b, tol);
  if (lo_inf && hi_inf) {
    return integrate(f, -std::numeric_limits<double>::infinity(), 0.0, tol / 2) +
           integrate(f, 0.0, std::numeric_limits<double>::infinity(), tol / 2);
  }
  if (hi_inf) {
    // t = a + x / (1 - x), x in [0, 1).
    auto g = [&](double x) {
      const double one_minus = 1.0 - x;
      if (one_minus <= 0.0) return 0.0;
      const double t = a + x / one_minus;
      return f(t) / (one_minus * one_minus);
    };
    return adaptive(g, 0.0, 1.0, tol);
  }
  // t = b - x / (1 - x).
  auto g = [&](double x) {
    const double one_minus = 1.0 - x;
    if (one_minus <= 0.0) return 0.0;
    const double t = b - x / one_minus;
    return f(t) / (one_minus * one_minus);
  };
  return adaptive(g, 0.0, 1.0, tol);
}

/// erf by its Maclaurin series (good to ~1e-15 for |x| <= 3).
inline double erf_series(double x) {
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-18) break;
  }
  return 2.0 / std::sqrt(kPi) * sum;
}

inline double normal_cdf_series(double u) { return 0.5 * (1.0 + erf_series(u / std::sqrt(2.0))); }

inline double normal_pdf(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi); }

inline double student_pdf(double t, double nu) {
  const double norm = std::tgamma(0.5 * (nu + 1.0)) / (std::sqrt(nu * kPi) * std::tgamma(0.5 * nu));
  return norm * std::pow(1.0 + t * t / nu, -0.5 * (nu + 1.0));
}

inline double weibull_pdf(double t, double k, double sigma) {
  if (t <= 0.0) return 0.0;
  return k / sigma * std::pow(t / sigma, k - 1.0) * std::exp(-std::pow(t / sigma, k));
}

/// Digamma from its series -gamma + sum_{k>=0} (1/(k+1) - 1/(k+u)), summed
/// directly for N terms with an Euler-Maclaurin tail.
inline double digamma_series(double u) {
  const double euler = 0.57721566490153286061;
  const int terms = 100000;
  double sum = 0.0;
  double carry = 0.0;
  for (int k = terms - 1; k >= 0; --k) {
    const double y = (1.0 / (k + 1.0) - 1.0 / (k + u)) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  const double n = terms;
  const double f_n = 1.0 / (n + 1.0) - 1.0 / (n + u);
  const double df_n = -1.0 / ((n + 1.0) * (n + 1.0)) + 1.0 / ((n + u) * (n + u));
  const double tail = std::log((n + u) / (n + 1.0)) + 0.5 * f_n - df_n / 12.0;
  return -euler + sum + tail;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& values) {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    ++count;
    const double d = v - mean;
    mean += d / count;
    m2 += d * (v - mean);
  }
  const double var = count > 1 ? m2 / (count - 1) : 0.0;
  return {mean, std::sqrt(var / count)};
}

/// Draws from the named noise family with std:: distributions.
inline std::vector<double> draw_normal(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> out(count);
  for (double& v : out) v = d(rng);
  return out;
}

inline std::vector<double> draw_weibull(std::size_t count, double k, double sigma,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::weibull_distribution<double> d(k, sigma);
  std::vector<double> out(count);
  for (double& v : out) v = d(rng);
  return out;
}

inline std::vector<double> draw_student(std::size_t count, double nu, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::student_t_distribution<double> d(nu);
  std::vector<double> out(count);
  for (double& v : out) v = d(rng);
  return out;
}

/// Reference soft truncation, written independently of the library.
inline double psi(double u) {
  const double r2 = std::sqrt(2.0);
  if (u > r2) return 2.0 * r2 / 3.0;
  if (u < -r2) return -2.0 * r2 / 3.0;
  return u - u * u * u / 6.0;
}

}  // namespace oracle
