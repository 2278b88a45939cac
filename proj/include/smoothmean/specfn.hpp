#pragma once

// Special functions needed by the closed-form kernels and the deviation
// bounds. Positive real arguments only; every routine is a pure function.

namespace smoothmean::specfn {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kEulerGamma = 0.57721566490153286;

/// Standard Normal CDF. Saturates to 0/1 in the far tails.
double normal_cdf(double u);

/// Euler gamma function for u > 0.
double gamma_fn(double u);

/// log Gamma(u) for u > 0 (Lanczos approximation).
double log_gamma(double u);

/// d/du log Gamma(u) for u > 0.
double digamma(double u);

/// Regularized lower incomplete gamma P(shape, x).
double regularized_lower_gamma(double shape, double x);

/// Unnormalized lower incomplete gamma: integral of e^-t t^(shape-1) on [0, x].
double lower_incomplete_gamma(double shape, double x);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of the Student-t distribution with `dof` > 0 degrees of freedom.
double student_cdf(double u, double dof);

/// Normalizing constant of the Student-t density,
/// Gamma((dof+1)/2) / (sqrt(dof*pi) Gamma(dof/2)).
double student_normalizer(double dof);

/// Gudermannian function 2 atan(e^u) - pi/2.
double gudermannian(double u);

}  // namespace smoothmean::specfn
