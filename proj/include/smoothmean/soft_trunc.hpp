#pragma once

#include <cmath>

#include "smoothmean/specfn.hpp"

namespace smoothmean {

/// Saturation level 2*sqrt(2)/3 of the soft truncation.
inline constexpr double kTruncCeiling = 2.0 * specfn::kSqrt2 / 3.0;

/// Catoni-Giulini soft truncation: u - u^3/6 on [-sqrt2, sqrt2], constant
/// +-2 sqrt2/3 outside. Odd, nondecreasing, bounded.
inline double soft_trunc(double u) {
  if (u > specfn::kSqrt2) return kTruncCeiling;
  if (u < -specfn::kSqrt2) return -kTruncCeiling;
  return u - u * u * u / 6.0;
}

/// Same function written with indicators; the smoothed kernels are derived
/// from this form.
inline double soft_trunc_indicator_form(double u) {
  const double below_upper = u <= specfn::kSqrt2 ? 1.0 : 0.0;
  const double below_lower = u < -specfn::kSqrt2 ? 1.0 : 0.0;
  const double inner = below_upper - below_lower;
  const double cubic = inner != 0.0 ? u - u * u * u / 6.0 : 0.0;
  return cubic * inner + kTruncCeiling * (1.0 - below_upper - below_lower);
}

/// Lower and upper logarithmic envelopes of soft_trunc.
inline double soft_trunc_lower_envelope(double u) {
  return -std::log(1.0 - u + 0.5 * u * u);
}
inline double soft_trunc_upper_envelope(double u) {
  return std::log(1.0 + u + 0.5 * u * u);
}

}  // namespace smoothmean
