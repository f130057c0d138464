#pragma once

// Dual-affine structure of exponential families: Fisher metric, convex
// potentials and Legendre duality, Bregman and KL divergences, the triangle
// gap, alpha-connections, and rotations of metrics and connections.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualgeo/distributions.hpp"

namespace dualgeo {

struct MetricTensor {
  Chart chart = Chart::Natural;
  ParameterPoint at;
  Eigen::MatrixXd components;
};

/// A strictly convex potential psi on the primal chart together with its
/// Legendre dual phi on the dual chart.
struct PotentialPair {
  using Scalar = std::function<double(const Eigen::VectorXd&)>;
  using Vector = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using Matrix = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
  using Domain = std::function<bool(const Eigen::VectorXd&)>;

  std::string name;
  int dimension = 0;
  Scalar psi;
  Vector grad_psi;
  Matrix hess_psi;
  Scalar phi;
  Vector grad_phi;
  Matrix hess_phi;
  Domain primal_domain;
  Domain dual_domain;

  /// Log-partition of an exponential family with negative entropy as dual.
  static PotentialPair exponential(const DistributionFamily& family);
  /// psi(theta) = |theta|^2 / 2, which is its own Legendre dual.
  static PotentialPair quadratic(int dimension);
  /// Builds phi numerically from the supremum definition
  /// phi(eta) = sup_theta <theta, eta> - psi(theta) by damped Newton.
  static PotentialPair from_primal(std::string name, int dimension, Scalar psi,
                                   Vector grad_psi, Matrix hess_psi);
};

struct LegendreResult {
  ParameterPoint eta;
  double phi_value = 0.0;
};

/// Connection coefficients at a point. components[i](j, k) = Gamma^i_{jk}.
struct ChristoffelArray {
  Chart chart = Chart::Natural;
  ParameterPoint at;
  double alpha = 0.0;
  std::vector<Eigen::MatrixXd> components;

  int dimension() const { return static_cast<int>(components.size()); }
};

/// Rotation in the (i, j) coordinate plane:
/// R(i,i) = R(j,j) = cos a, R(i,j) = -sin a, R(j,i) = sin a.
struct RotationMap {
  int dimension = 2;
  int plane_i = 0;
  int plane_j = 1;
  double angle = 0.0;
  Eigen::MatrixXd matrix;
  /// Set when the map varies over the chart; transform_christoffel then needs
  /// the derivative field.
  bool position_dependent = false;

  static RotationMap planar(int dimension, int i, int j, double angle);
  static RotationMap identity(int dimension) { return planar(dimension, 0, 1, 0.0); }
};

struct DualMetrics {
  MetricTensor g;
  MetricTensor g_star;
};

/// g_ij = E[d_i log p d_j log p] in the chart of `point`: exact sums for
/// discrete families, Gauss-Hermite quadrature for the Gaussian.
MetricTensor fisher_metric(const DistributionFamily& family, const ParameterPoint& point);

/// eta = grad psi(theta), phi(eta) = <theta, eta> - psi(theta).
LegendreResult legendre_dual(const PotentialPair& pot, const ParameterPoint& theta);

/// psi(theta) + phi(eta) - <theta, eta>; theta must be natural, eta mean.
double bregman_divergence(const PotentialPair& pot, const ParameterPoint& theta,
                          const ParameterPoint& eta);

/// KL(P || Q) in nats. Discrete mean-chart points may sit on the boundary of
/// the simplex; a zero of Q where P is positive returns +infinity.
double kl_divergence(const DistributionFamily& family, const ParameterPoint& p,
                     const ParameterPoint& q);

/// Signed triangle excess KL(P||R) + KL(R||Q) - KL(P||Q).
double pythagorean_gap(const DistributionFamily& family, const ParameterPoint& p,
                       const ParameterPoint& r, const ParameterPoint& q);

/// Fisher inner product at R of the m-geodesic P->R and e-geodesic R->Q
/// velocities, <eta_R - eta_P, theta_Q - theta_R>. Zero is the orthogonal
/// (Pythagorean) configuration.
double pythagorean_orthogonality(const DistributionFamily& family, const ParameterPoint& p,
                                 const ParameterPoint& r, const ParameterPoint& q);

/// g = Hess psi(theta) on the primal chart, g* = Hess phi(eta) at
/// eta = grad psi(theta) on the dual chart.
DualMetrics dual_metrics(const PotentialPair& pot, const ParameterPoint& theta);

/// Lowered alpha-connection Gamma_{ij,k} = E[(d_i d_j l + (1-alpha)/2 d_i l d_j l) d_k l]
/// in the chart of `point`. Returned as lowered[k](i, j).
std::vector<Eigen::MatrixXd> christoffel_lowered(const DistributionFamily& family,
                                                 const ParameterPoint& point, double alpha);

/// Alpha-connection with the upper index raised by the Fisher metric.
/// alpha = 1 is the e-connection, -1 the m-connection, 0 Levi-Civita.
ChristoffelArray christoffel(const DistributionFamily& family, const ParameterPoint& point,
                             double alpha);

/// Coordinates move as x~ = R x, so the metric becomes R g R^T.
MetricTensor transform_metric(const MetricTensor& g, const RotationMap& rotation);
Eigen::VectorXd transform_point(const Eigen::VectorXd& x, const RotationMap& rotation);

/// Gamma~^i_{jk} = R^i_m Gamma^m_{np} (R^-1)^n_j (R^-1)^p_k, plus
/// R^i_m dR^m_j / dx~^k for position-dependent maps. `derivative[k]` holds
/// dR/dx~^k and is required when rotation.position_dependent is set.
ChristoffelArray transform_christoffel(
    const ChristoffelArray& gamma, const RotationMap& rotation,
    const std::vector<Eigen::MatrixXd>* derivative = nullptr);

}  // namespace dualgeo
