#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace dualgeo::numerics {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Central-difference step for first derivatives: max(1,|x|) * eps^(1/3).
inline double first_difference_step(double x) {
  return std::max(1.0, std::abs(x)) * std::cbrt(kEps);
}

/// Central-difference step for second derivatives: max(1,|x|) * eps^(1/4).
inline double second_difference_step(double x) {
  return std::max(1.0, std::abs(x)) * std::sqrt(std::sqrt(kEps));
}

/// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

/// Gauss-Hermite rule for expectations under the standard normal:
/// E[f(Z)] ~= sum_i weights[i] * f(nodes[i]). Exact for polynomials of degree
/// < 2 * nodes.size().
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached 48-point rule (probabilists' weight, weights sum to 1).
const HermiteRule& standard_normal_rule();

/// Adaptive Gauss-Kronrod quadrature on [a, b]. Throws NonConvergenceError
/// if the estimated relative error exceeds `tolerance` (with an absolute
/// floor of `tolerance` for integrals near zero).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance = 1e-12);

/// Composite trapezoid on a uniform grid of spacing h.
double trapezoid(std::span<const double> values, double h);

}  // namespace dualgeo::numerics
