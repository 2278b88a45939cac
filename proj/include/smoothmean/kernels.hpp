#pragma once

#include <array>
#include <variant>

namespace smoothmean {

/// Standard Normal perturbation W ~ N(0, 1).
struct Normal01 {};

/// Weibull perturbation with shape k > 0 and scale sigma > 0.
struct Weibull {
  double shape = 2.0;
  double scale = 1.0;
};

/// Student-t perturbation; the degree-3 closed form needs dof > 5.
struct Student {
  double dof = 5.1;
};

using KernelFamily = std::variant<Normal01, Weibull, Student>;

/// Arguments (a, b) of E psi(a + b W).
struct ShiftScale {
  double shift = 0.0;
  double scale = 0.0;
};

/// Throws std::domain_error unless the family's parameters are valid.
void validate(const KernelFamily& family);

/// Partial raw moments of W in closed form.
///
/// M^k(u) = E[W^k 1{W <= u}] for k = 0..3 is evaluated per family: the
/// Normal recursions in terms of Phi and the density, the Weibull forms in
/// terms of the lower incomplete gamma, and the Student forms, whose degree-2
/// and degree-3 terms call back into the Student CDF and first partial moment
/// at dof - 2. Constants that depend only on the family are computed once at
/// construction.
///
/// E psi(a + b W) is then assembled from the sign-aware shifted moments
/// M^k_{a,b}(u) = E[W^k 1{a + b W <= u}] at u = +-sqrt2.
class SmoothedKernel {
 public:
  explicit SmoothedKernel(KernelFamily family);

  const KernelFamily& family() const { return family_; }

  /// E W^k for k in 0..3.
  double raw_moment(int k) const;

  /// M^0..M^3 of the unshifted, unscaled W at u (u may be infinite).
  std::array<double, 4> base_moments(double u) const;

  double base_moment_indicator(int k, double u) const;

  /// M^k_{a,b}(u); b must be nonzero.
  double shifted_moment_indicator(int k, ShiftScale pair, double u) const;

  /// D^k_{a,b}(u) = M^k_{a,b}(u) - M^k_{a,b}(-u).
  double d_term(int k, ShiftScale pair, double u) const;

  /// E psi(a + b W). b = 0 reduces to psi(a).
  double smoothed_trunc(ShiftScale pair) const;

 private:
  std::array<double, 4> shifted_moments(ShiftScale pair, double u) const;

  KernelFamily family_;
  std::array<double, 4> raw_{};
  // Student normalizers at dof and dof - 2.
  double student_norm_ = 0.0;
  double student_norm_lower_ = 0.0;
};

// Free-function forms of the SmoothedKernel methods.
double raw_moment(const KernelFamily& family, int k);
double base_moment_indicator(const KernelFamily& family, int k, double u);
double shifted_moment_indicator(const KernelFamily& family, int k, ShiftScale pair, double u);
double d_term(const KernelFamily& family, int k, ShiftScale pair, double u);
double smoothed_trunc(const KernelFamily& family, ShiftScale pair);

}  // namespace smoothmean
