#include "dualgeo/infogeo.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "dualgeo/error.hpp"

namespace dualgeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

bool positive_definite(const MatrixXd& m) {
  if (!m.allFinite()) return false;
  Eigen::LLT<MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

// Outcome probabilities that may touch the boundary of the simplex. Only mean
// chart points can express boundary values.
VectorXd closed_probabilities(const DistributionFamily& family, const ParameterPoint& point,
                              const char* field) {
  if (point.chart == Chart::Natural) {
    try {
      return probabilities(family, point);
    } catch (const ValidationError& e) {
      throw ValidationError(field, e.reason());
    }
  }
  require(point.chart == Chart::Mean, field, "chart not declared by this family");
  require(point.coords.size() == family.dimension(), field,
          "coordinate count does not match family dimension");
  VectorXd p(family.outcomes());
  if (family.kind() == FamilyKind::Bernoulli) {
    p << 1.0 - point.coords(0), point.coords(0);
  } else {
    p.head(family.dimension()) = point.coords;
    p(family.dimension()) = 1.0 - point.coords.sum();
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    // Tolerate the rounding left by 1 - sum.
    if (p(i) < 0 && p(i) > -1e-12) p(i) = 0.0;
    require(std::isfinite(p(i)) && p(i) >= 0 && p(i) <= 1, field, "probability outside [0,1]");
  }
  return p;
}

ParameterPoint checked_chart(const DistributionFamily& family, const ParameterPoint& point,
                             Chart chart, const char* field) {
  try {
    return to_chart(family, point, chart);
  } catch (const ValidationError& e) {
    throw ValidationError(field, e.reason());
  }
}

}  // namespace

PotentialPair PotentialPair::exponential(const DistributionFamily& family) {
  PotentialPair pot;
  pot.name = std::string(to_string(family.kind()));
  pot.dimension = family.dimension();
  pot.psi = [family](const VectorXd& t) { return log_partition(family, t); };
  pot.grad_psi = [family](const VectorXd& t) { return log_partition_gradient(family, t); };
  pot.hess_psi = [family](const VectorXd& t) { return log_partition_hessian(family, t); };
  pot.phi = [family](const VectorXd& e) { return negative_entropy(family, e); };
  pot.grad_phi = [family](const VectorXd& e) { return negative_entropy_gradient(family, e); };
  pot.hess_phi = [family](const VectorXd& e) { return negative_entropy_hessian(family, e); };
  pot.primal_domain = [family](const VectorXd& t) {
    try {
      validate_point(family, {Chart::Natural, t});
      return true;
    } catch (const ValidationError&) {
      return false;
    }
  };
  pot.dual_domain = [family](const VectorXd& e) {
    try {
      validate_point(family, {Chart::Mean, e});
      return true;
    } catch (const ValidationError&) {
      return false;
    }
  };
  return pot;
}

PotentialPair PotentialPair::quadratic(int dimension) {
  require(dimension >= 1, "dimension", "must be positive");
  PotentialPair pot;
  pot.name = "quadratic";
  pot.dimension = dimension;
  pot.psi = [](const VectorXd& t) { return 0.5 * t.squaredNorm(); };
  pot.grad_psi = [](const VectorXd& t) { return t; };
  pot.hess_psi = [dimension](const VectorXd&) { return MatrixXd::Identity(dimension, dimension); };
  pot.phi = pot.psi;
  pot.grad_phi = pot.grad_psi;
  pot.hess_phi = pot.hess_psi;
  pot.primal_domain = [dimension](const VectorXd& t) {
    return t.size() == dimension && t.allFinite();
  };
  pot.dual_domain = pot.primal_domain;
  return pot;
}

PotentialPair PotentialPair::from_primal(std::string name, int dimension, Scalar psi,
                                         Vector grad_psi, Matrix hess_psi) {
  PotentialPair pot;
  pot.name = std::move(name);
  pot.dimension = dimension;
  pot.psi = psi;
  pot.grad_psi = grad_psi;
  pot.hess_psi = hess_psi;
  pot.primal_domain = [dimension, psi](const VectorXd& t) {
    return t.size() == dimension && t.allFinite() && std::isfinite(psi(t));
  };
  pot.dual_domain = [dimension](const VectorXd& e) {
    return e.size() == dimension && e.allFinite();
  };

  // Maximizer of <theta, eta> - psi(theta): damped Newton from the origin.
  auto argmax = [=](const VectorXd& eta) {
    VectorXd theta = VectorXd::Zero(dimension);
    auto objective = [&](const VectorXd& t) { return t.dot(eta) - psi(t); };
    double value = objective(theta);
    for (int iter = 0; iter < 200; ++iter) {
      const VectorXd residual = eta - grad_psi(theta);
      if (residual.norm() <= 1e-14 * std::max(1.0, eta.norm())) return theta;
      const VectorXd step = hess_psi(theta).ldlt().solve(residual);
      double scale = 1.0;
      for (int halving = 0; halving < 60; ++halving, scale *= 0.5) {
        const VectorXd trial = theta + scale * step;
        const double trial_value = objective(trial);
        if (std::isfinite(trial_value) && trial_value >= value - 1e-15 * std::abs(value)) {
          theta = trial;
          value = trial_value;
          break;
        }
      }
      if (scale * step.norm() <= 1e-16 * std::max(1.0, theta.norm())) break;
    }
    if ((eta - grad_psi(theta)).norm() > 1e-10 * std::max(1.0, eta.norm())) {
      throw NonConvergenceError("legendre", "no maximizer of <theta,eta> - psi(theta)");
    }
    return theta;
  };
  pot.grad_phi = argmax;
  pot.phi = [=](const VectorXd& eta) {
    const VectorXd theta = argmax(eta);
    return theta.dot(eta) - psi(theta);
  };
  pot.hess_phi = [=](const VectorXd& eta) {
    const MatrixXd h = hess_psi(argmax(eta));
    return MatrixXd(h.inverse());
  };
  return pot;
}

RotationMap RotationMap::planar(int dimension, int i, int j, double angle) {
  require(dimension >= 2, "dimension", "rotation needs at least 2 dimensions");
  require(i >= 0 && j >= 0 && i < dimension && j < dimension && i != j, "plane",
          "plane indices must be distinct and in range");
  require(std::isfinite(angle), "angle", "must be finite");
  RotationMap r;
  r.dimension = dimension;
  r.plane_i = i;
  r.plane_j = j;
  r.angle = angle;
  r.matrix = MatrixXd::Identity(dimension, dimension);
  const double c = std::cos(angle), s = std::sin(angle);
  r.matrix(i, i) = c;
  r.matrix(j, j) = c;
  r.matrix(i, j) = -s;
  r.matrix(j, i) = s;
  return r;
}

MetricTensor fisher_metric(const DistributionFamily& family, const ParameterPoint& point) {
  validate_point(family, point);
  MatrixXd g = expectation(family, point, [&](double x) -> MatrixXd {
    const VectorXd s = score(family, point, x);
    return s * s.transpose();
  });
  g = 0.5 * (g + g.transpose());
  return {point.chart, point, g};
}

LegendreResult legendre_dual(const PotentialPair& pot, const ParameterPoint& theta) {
  require(theta.chart == Chart::Natural, "theta", "chart-mismatch: expected primal chart");
  require(theta.coords.size() == pot.dimension, "theta", "dimension mismatch");
  require(pot.primal_domain(theta.coords), "theta", "outside the potential's domain");
  require(positive_definite(pot.hess_psi(theta.coords)), "theta", "non-convex-at-point");
  const VectorXd eta = pot.grad_psi(theta.coords);
  return {{Chart::Mean, eta}, theta.coords.dot(eta) - pot.psi(theta.coords)};
}

double bregman_divergence(const PotentialPair& pot, const ParameterPoint& theta,
                          const ParameterPoint& eta) {
  require(theta.chart == Chart::Natural, "theta", "chart-mismatch: expected primal chart");
  require(eta.chart == Chart::Mean, "eta", "chart-mismatch: expected dual chart");
  require(theta.coords.size() == pot.dimension && eta.coords.size() == pot.dimension,
          "eta", "dimension mismatch");
  require(pot.primal_domain(theta.coords), "theta", "outside the potential's domain");
  require(pot.dual_domain(eta.coords), "eta", "outside the dual potential's domain");
  const double d = pot.psi(theta.coords) + pot.phi(eta.coords) - theta.coords.dot(eta.coords);
  // Exact zero is a non-negative quantity; clip rounding below it.
  return std::max(d, 0.0);
}

double kl_divergence(const DistributionFamily& family, const ParameterPoint& p,
                     const ParameterPoint& q) {
  if (family.is_discrete()) {
    const VectorXd pp = closed_probabilities(family, p, "P");
    const VectorXd qq = closed_probabilities(family, q, "Q");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < pp.size(); ++i) {
      if (pp(i) == 0.0) continue;
      if (qq(i) == 0.0) return std::numeric_limits<double>::infinity();
      sum += pp(i) * (std::log(pp(i)) - std::log(qq(i)));
    }
    return std::max(sum, 0.0);
  }
  const ParameterPoint pr = checked_chart(family, p, Chart::Raw, "P");
  const ParameterPoint qr = checked_chart(family, q, Chart::Raw, "Q");
  const MatrixXd e = expectation(family, pr, [&](double x) -> MatrixXd {
    return MatrixXd::Constant(1, 1, log_density(family, pr, x) - log_density(family, qr, x));
  });
  return std::max(e(0, 0), 0.0);
}

double pythagorean_gap(const DistributionFamily& family, const ParameterPoint& p,
                       const ParameterPoint& r, const ParameterPoint& q) {
  return kl_divergence(family, p, r) + kl_divergence(family, r, q) - kl_divergence(family, p, q);
}

double pythagorean_orthogonality(const DistributionFamily& family, const ParameterPoint& p,
                                 const ParameterPoint& r, const ParameterPoint& q) {
  const VectorXd eta_p = checked_chart(family, p, Chart::Mean, "P").coords;
  const VectorXd eta_r = checked_chart(family, r, Chart::Mean, "R").coords;
  const VectorXd theta_r = checked_chart(family, r, Chart::Natural, "R").coords;
  const VectorXd theta_q = checked_chart(family, q, Chart::Natural, "Q").coords;
  return (eta_r - eta_p).dot(theta_q - theta_r);
}

DualMetrics dual_metrics(const PotentialPair& pot, const ParameterPoint& theta) {
  const LegendreResult dual = legendre_dual(pot, theta);
  const MatrixXd g = pot.hess_psi(theta.coords);
  const MatrixXd g_star = pot.hess_phi(dual.eta.coords);
  require(positive_definite(g_star), "eta", "degenerate dual Hessian");
  return {{Chart::Natural, theta, g}, {Chart::Mean, dual.eta, g_star}};
}

std::vector<MatrixXd> christoffel_lowered(const DistributionFamily& family,
                                          const ParameterPoint& point, double alpha) {
  validate_point(family, point);
  require(std::isfinite(alpha), "alpha", "must be finite");
  const int d = family.dimension();
  const double weight = 0.5 * (1.0 - alpha);
  // Row i*d + j, column k holds Gamma_{ij,k}.
  const MatrixXd packed = expectation(family, point, [&](double x) -> MatrixXd {
    const VectorXd s = score(family, point, x);
    const MatrixXd h = log_density_hessian(family, point, x);
    MatrixXd m(d * d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m.row(i * d + j) = (h(i, j) + weight * s(i) * s(j)) * s.transpose();
    return m;
  });
  std::vector<MatrixXd> lowered(d, MatrixXd::Zero(d, d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        // Symmetrize in (i, j): the exact value is symmetric.
        lowered[k](i, j) = 0.5 * (packed(i * d + j, k) + packed(j * d + i, k));
      }
  return lowered;
}

ChristoffelArray christoffel(const DistributionFamily& family, const ParameterPoint& point,
                             double alpha) {
  const std::vector<MatrixXd> lowered = christoffel_lowered(family, point, alpha);
  const MatrixXd g_inv = fisher_metric(family, point).components.inverse();
  const int d = family.dimension();
  ChristoffelArray out{point.chart, point, alpha, std::vector<MatrixXd>(d, MatrixXd::Zero(d, d))};
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) out.components[i] += g_inv(i, k) * lowered[k];
  return out;
}

MetricTensor transform_metric(const MetricTensor& g, const RotationMap& rotation) {
  require(g.components.rows() == rotation.dimension, "rotation", "dimension-mismatch");
  const MatrixXd& r = rotation.matrix;
  MatrixXd out = r * g.components * r.transpose();
  out = 0.5 * (out + out.transpose());
  ParameterPoint at = g.at;
  if (at.coords.size() == rotation.dimension) at.coords = r * at.coords;
  return {g.chart, at, out};
}

VectorXd transform_point(const VectorXd& x, const RotationMap& rotation) {
  require(x.size() == rotation.dimension, "rotation", "dimension-mismatch");
  return rotation.matrix * x;
}

ChristoffelArray transform_christoffel(const ChristoffelArray& gamma, const RotationMap& rotation,
                                       const std::vector<MatrixXd>* derivative) {
  const int d = gamma.dimension();
  require(d == rotation.dimension, "rotation", "dimension-mismatch");
  if (rotation.position_dependent) {
    require(derivative != nullptr, "derivative",
            "missing derivative field for position-dependent map");
  }
  if (derivative != nullptr) {
    require(static_cast<int>(derivative->size()) == d, "derivative", "dimension-mismatch");
  }
  const MatrixXd& r = rotation.matrix;
  const MatrixXd r_inv = r.transpose();

  ChristoffelArray out{gamma.chart, gamma.at, gamma.alpha,
                       std::vector<MatrixXd>(d, MatrixXd::Zero(d, d))};
  if (out.at.coords.size() == d) out.at.coords = r * out.at.coords;
  // Lower indices: (R^-1)^T Gamma^m (R^-1) for each m; upper: mix with R.
  std::vector<MatrixXd> lowered_rotated(d);
  for (int m = 0; m < d; ++m) lowered_rotated[m] = r_inv.transpose() * gamma.components[m] * r_inv;
  for (int i = 0; i < d; ++i)
    for (int m = 0; m < d; ++m) out.components[i] += r(i, m) * lowered_rotated[m];

  if (derivative != nullptr) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double extra = 0.0;
          for (int m = 0; m < d; ++m) extra += r(i, m) * (*derivative)[k](m, j);
          out.components[i](j, k) += extra;
        }
  }
  return out;
}

}  // namespace dualgeo
