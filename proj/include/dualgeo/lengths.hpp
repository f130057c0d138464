#pragma once

// Arc-length functionals on statistical manifolds and geodesic construction.

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dualgeo/distributions.hpp"
#include "dualgeo/infogeo.hpp"
#include "dualgeo/kernels.hpp"

namespace dualgeo {

/// Curve sampled on the uniform grid t_i = i / (n - 1) of [0, 1]. Velocities
/// dx/dt are optional; when absent they are recovered by second-order finite
/// differences on the grid.
struct ParamPath {
  Chart chart = Chart::Natural;
  std::vector<Eigen::VectorXd> samples;
  std::optional<std::vector<Eigen::VectorXd>> velocities;

  /// Straight segment from `from` to `to` with exact velocities.
  static ParamPath line(Chart chart, const Eigen::VectorXd& from, const Eigen::VectorXd& to,
                        int count);
  /// Samples curve(t) and, if given, its derivative.
  static ParamPath sampled(Chart chart, const std::function<Eigen::VectorXd(double)>& curve,
                           int count,
                           const std::function<Eigen::VectorXd(double)>& derivative = {});

  int size() const { return static_cast<int>(samples.size()); }
  double spacing() const { return 1.0 / (size() - 1); }
};

struct LengthReport {
  double primal = 0.0;
  double dual = 0.0;
  double harmonic = 0.0;
  double divergence_based = 0.0;
  int grid_size = 0;
};

using MetricField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Velocities of the path: stored ones, or finite differences.
std::vector<Eigen::VectorXd> path_velocities(const ParamPath& path);

/// Composite trapezoid of sqrt(g(x) (x', x')) along the path.
double metric_length(const ParamPath& path, const MetricField& metric,
                     kernels::Policy policy = kernels::Policy::Parallel);

/// Fisher-metric length in the path's chart.
double primal_length(const ParamPath& path, const DistributionFamily& family,
                     kernels::Policy policy = kernels::Policy::Parallel);
/// Length under Hess psi for a natural-chart path.
double primal_length(const ParamPath& path, const PotentialPair& pot,
                     kernels::Policy policy = kernels::Policy::Parallel);

/// Length under g* = Hess phi. Natural-chart paths are first carried to the
/// dual chart through grad psi; mean-chart paths are measured directly.
double dual_length(const ParamPath& path, const PotentialPair& pot,
                   kernels::Policy policy = kernels::Policy::Parallel);

/// Length under H = 2 (g^-1 + g*^-1)^-1, both fields taken at the path's
/// coordinates.
double harmonic_length(const ParamPath& path, const MetricField& g, const MetricField& g_star,
                       kernels::Policy policy = kernels::Policy::Parallel);

/// Hessians of the KL divergence on the diagonal: the metric from the first
/// argument (g) and from the second (g*), by central second differences.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> divergence_metrics(const DistributionFamily& family,
                                                               const ParameterPoint& point);

/// Infinitesimal-element form: integral of sqrt((g + g*)(x', x')) with both
/// metrics from KL Hessians.
double divergence_length(const ParamPath& path, const DistributionFamily& family,
                         kernels::Policy policy = kernels::Policy::Parallel);

/// Second-derivative form: integrand
/// sqrt(d^2/dtau^2 [D(x + tau v || x) + D(x || x + tau v)] at tau = 0).
double divergence_length_second_derivative(const ParamPath& path,
                                           const DistributionFamily& family,
                                           kernels::Policy policy = kernels::Policy::Parallel);

/// Primal, dual, harmonic and divergence lengths of one path. Paths in the raw
/// Gaussian chart are carried to the natural chart for the potential-based
/// entries.
LengthReport length_report(const ParamPath& path, const DistributionFamily& family);

/// Geodesic from A to B (same chart) sampled at `count` points, returned in
/// that chart. alpha = 1 is the natural-chart segment, alpha = -1 the
/// mean-chart segment, alpha = 0 the Levi-Civita geodesic by RK4 shooting.
ParamPath geodesic(const DistributionFamily& family, const ParameterPoint& from,
                   const ParameterPoint& to, double alpha, int count = 201);

/// Integrates x'' = -Gamma(x)(x', x') with fixed-step RK4 over t in [0, 1].
ParamPath integrate_geodesic(Chart chart, const std::function<ChristoffelArray(const Eigen::VectorXd&)>& connection,
                             const Eigen::VectorXd& start, const Eigen::VectorXd& velocity,
                             int count);

}  // namespace dualgeo
