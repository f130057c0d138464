#pragma once

// Parametrized probability families: the points of the statistical manifold.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dualgeo {

enum class FamilyKind { Gaussian1D, Bernoulli, Categorical };

/// Coordinate chart of a parameter point. Raw is the (mu, sigma) chart of the
/// Gaussian; discrete families only declare Natural and Mean.
enum class Chart { Natural, Mean, Raw };

std::string_view to_string(Chart chart);
std::string_view to_string(FamilyKind kind);

class DistributionFamily {
 public:
  static DistributionFamily gaussian();
  static DistributionFamily bernoulli();
  /// Categorical over `outcomes` >= 2 outcomes. Coordinates cover the first
  /// outcomes - 1 entries; the last outcome is the reference.
  static DistributionFamily categorical(int outcomes);

  FamilyKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dimension_; }
  /// Size of the sample space for discrete families, 0 for the Gaussian.
  int outcomes() const noexcept { return outcomes_; }
  bool is_discrete() const noexcept { return kind_ != FamilyKind::Gaussian1D; }
  bool has_chart(Chart chart) const noexcept;

  friend bool operator==(const DistributionFamily&, const DistributionFamily&) = default;

 private:
  DistributionFamily(FamilyKind kind, int dimension, int outcomes)
      : kind_(kind), dimension_(dimension), outcomes_(outcomes) {}

  FamilyKind kind_;
  int dimension_;
  int outcomes_;
};

struct ParameterPoint {
  Chart chart = Chart::Natural;
  Eigen::VectorXd coords;

  ParameterPoint() = default;
  ParameterPoint(Chart c, Eigen::VectorXd x) : chart(c), coords(std::move(x)) {}
  ParameterPoint(Chart c, std::initializer_list<double> x);
};

/// Throws ValidationError unless `point` is a finite, interior point of a
/// chart the family declares.
void validate_point(const DistributionFamily& family, const ParameterPoint& point);

/// Exact closed-form chart conversions. Raw is only reachable for the
/// Gaussian.
ParameterPoint to_chart(const DistributionFamily& family, const ParameterPoint& point,
                        Chart target);

/// Outcome probabilities of a discrete family (length outcomes()).
Eigen::VectorXd probabilities(const DistributionFamily& family, const ParameterPoint& point);

/// Sufficient statistic T(x): Gaussian (x, x^2); Bernoulli x; categorical
/// the indicator vector of the first outcomes - 1 outcomes.
Eigen::VectorXd sufficient_statistic(const DistributionFamily& family, double x);

double log_density(const DistributionFamily& family, const ParameterPoint& point, double x);

/// Gradient of log p with respect to the coordinates of `point`'s chart.
Eigen::VectorXd score(const DistributionFamily& family, const ParameterPoint& point, double x);

/// Hessian of log p with respect to the coordinates of `point`'s chart.
Eigen::MatrixXd log_density_hessian(const DistributionFamily& family,
                                    const ParameterPoint& point, double x);

/// Mean parameters eta = grad psi(theta). Accepts natural or mean charts;
/// raw Gaussian points must be converted first.
Eigen::VectorXd sufficient_stat_mean(const DistributionFamily& family,
                                     const ParameterPoint& point);

/// Log-partition psi(theta) and its first three derivatives in the natural
/// chart.
double log_partition(const DistributionFamily& family, const Eigen::VectorXd& theta);
Eigen::VectorXd log_partition_gradient(const DistributionFamily& family,
                                       const Eigen::VectorXd& theta);
Eigen::MatrixXd log_partition_hessian(const DistributionFamily& family,
                                      const Eigen::VectorXd& theta);
/// Third derivatives d^3 psi / dtheta_i dtheta_j dtheta_k, stored as
/// result[i](j, k).
std::vector<Eigen::MatrixXd> log_partition_third(const DistributionFamily& family,
                                                 const Eigen::VectorXd& theta);

/// Negative entropy phi(eta), the Legendre dual of psi, with its gradient
/// (= theta) and Hessian, in the mean chart.
double negative_entropy(const DistributionFamily& family, const Eigen::VectorXd& eta);
Eigen::VectorXd negative_entropy_gradient(const DistributionFamily& family,
                                          const Eigen::VectorXd& eta);
Eigen::MatrixXd negative_entropy_hessian(const DistributionFamily& family,
                                         const Eigen::VectorXd& eta);

/// E_p[f(X)] at `point`, summed exactly over discrete outcomes or by 48-point
/// Gauss-Hermite quadrature for the Gaussian. `f` returns a matrix of any
/// fixed shape.
Eigen::MatrixXd expectation(const DistributionFamily& family, const ParameterPoint& point,
                            const std::function<Eigen::MatrixXd(double)>& f);

}  // namespace dualgeo
