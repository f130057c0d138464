#include "dualgeo/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "dualgeo/error.hpp"
#include "dualgeo/numerics.hpp"

namespace dualgeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(Chart chart) {
  switch (chart) {
    case Chart::Natural: return "natural";
    case Chart::Mean: return "mean";
    case Chart::Raw: return "raw";
  }
  return "unknown";
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Gaussian1D: return "gaussian";
    case FamilyKind::Bernoulli: return "bernoulli";
    case FamilyKind::Categorical: return "categorical";
  }
  return "unknown";
}

DistributionFamily DistributionFamily::gaussian() { return {FamilyKind::Gaussian1D, 2, 0}; }
DistributionFamily DistributionFamily::bernoulli() { return {FamilyKind::Bernoulli, 1, 2}; }

DistributionFamily DistributionFamily::categorical(int outcomes) {
  require(outcomes >= 2, "outcomes", "categorical family needs at least 2 outcomes");
  return {FamilyKind::Categorical, outcomes - 1, outcomes};
}

bool DistributionFamily::has_chart(Chart chart) const noexcept {
  return chart != Chart::Raw || kind_ == FamilyKind::Gaussian1D;
}

ParameterPoint::ParameterPoint(Chart c, std::initializer_list<double> x) : chart(c) {
  coords.resize(static_cast<Eigen::Index>(x.size()));
  Eigen::Index i = 0;
  for (double v : x) coords(i++) = v;
}

namespace {

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double logistic(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Probabilities of all outcomes from natural log-odds against the last one.
VectorXd softmax_with_reference(const VectorXd& theta) {
  const double m = std::max(0.0, theta.size() > 0 ? theta.maxCoeff() : 0.0);
  VectorXd p(theta.size() + 1);
  for (Eigen::Index i = 0; i < theta.size(); ++i) p(i) = std::exp(theta(i) - m);
  p(theta.size()) = std::exp(-m);
  return p / p.sum();
}

struct RawGaussian {
  double mu;
  double sigma;
};

RawGaussian raw_gaussian(const ParameterPoint& point) {
  const VectorXd& c = point.coords;
  switch (point.chart) {
    case Chart::Raw: return {c(0), c(1)};
    case Chart::Natural: {
      const double var = -0.5 / c(1);
      return {c(0) * var, std::sqrt(var)};
    }
    case Chart::Mean: return {c(0), std::sqrt(c(1) - c(0) * c(0))};
  }
  return {0.0, 1.0};
}

int discrete_outcome(const DistributionFamily& family, double x) {
  const double rounded = std::round(x);
  if (!(rounded == x) || x < 0 || x >= family.outcomes()) {
    throw ValidationError("x", "outcome outside the support");
  }
  return static_cast<int>(rounded);
}

// d^3 phi / d eta^3 via the derivative of the inverse Hessian:
// phi'''_{ijk} = -G*_{ia} G*_{jb} G*_{kc} psi'''_{abc}.
std::vector<MatrixXd> negative_entropy_third(const DistributionFamily& family,
                                             const VectorXd& eta) {
  const VectorXd theta = negative_entropy_gradient(family, eta);
  const MatrixXd gstar = negative_entropy_hessian(family, eta);
  const std::vector<MatrixXd> psi3 = log_partition_third(family, theta);
  const int d = family.dimension();
  // Contract one index at a time.
  std::vector<MatrixXd> tmp(d, MatrixXd::Zero(d, d));
  for (int a = 0; a < d; ++a) tmp[a] = gstar * psi3[a] * gstar;  // tmp[a](j,k)
  std::vector<MatrixXd> out(d, MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a) out[i] -= gstar(i, a) * tmp[a];
  return out;
}

}  // namespace

void validate_point(const DistributionFamily& family, const ParameterPoint& point) {
  require(family.has_chart(point.chart), "chart", "chart not declared by this family");
  require(point.coords.size() == family.dimension(), "point",
          "coordinate count does not match family dimension");
  require(point.coords.allFinite(), "point", "coordinates must be finite");
  const VectorXd& c = point.coords;
  switch (family.kind()) {
    case FamilyKind::Gaussian1D:
      if (point.chart == Chart::Raw) require(c(1) > 0, "point", "sigma must be positive");
      if (point.chart == Chart::Natural)
        require(c(1) < 0, "point", "second natural coordinate must be negative");
      if (point.chart == Chart::Mean)
        require(c(1) - c(0) * c(0) > 0, "point", "variance must be positive");
      break;
    case FamilyKind::Bernoulli:
    case FamilyKind::Categorical:
      if (point.chart == Chart::Mean) {
        for (Eigen::Index i = 0; i < c.size(); ++i)
          require(c(i) > 0 && c(i) < 1, "point", "probability outside (0,1)");
        const double last = 1.0 - c.sum();
        require(last > 0 && last < 1, "point", "probability outside (0,1)");
      }
      break;
  }
}

ParameterPoint to_chart(const DistributionFamily& family, const ParameterPoint& point,
                        Chart target) {
  validate_point(family, point);
  require(family.has_chart(target), "chart", "target chart not declared by this family");
  if (point.chart == target) return point;

  if (family.kind() == FamilyKind::Gaussian1D) {
    const RawGaussian g = raw_gaussian(point);
    const double var = g.sigma * g.sigma;
    switch (target) {
      case Chart::Raw: return {Chart::Raw, {g.mu, g.sigma}};
      case Chart::Natural: return {Chart::Natural, {g.mu / var, -0.5 / var}};
      case Chart::Mean: return {Chart::Mean, {g.mu, g.mu * g.mu + var}};
    }
  }

  if (target == Chart::Mean) {
    const VectorXd p = softmax_with_reference(point.coords);
    if (family.kind() == FamilyKind::Bernoulli) return {Chart::Mean, {logistic(point.coords(0))}};
    return {Chart::Mean, p.head(family.dimension())};
  }
  const double last = 1.0 - point.coords.sum();
  VectorXd theta(family.dimension());
  for (int i = 0; i < family.dimension(); ++i)
    theta(i) = std::log(point.coords(i)) - std::log(last);
  return {Chart::Natural, theta};
}

VectorXd probabilities(const DistributionFamily& family, const ParameterPoint& point) {
  require(family.is_discrete(), "family", "probabilities require a discrete family");
  validate_point(family, point);
  if (point.chart == Chart::Natural) {
    if (family.kind() == FamilyKind::Bernoulli) {
      const double eta = logistic(point.coords(0));
      return VectorXd{{1.0 - eta, eta}};
    }
    return softmax_with_reference(point.coords);
  }
  if (family.kind() == FamilyKind::Bernoulli) {
    return VectorXd{{1.0 - point.coords(0), point.coords(0)}};
  }
  VectorXd p(family.outcomes());
  p.head(family.dimension()) = point.coords;
  p(family.dimension()) = 1.0 - point.coords.sum();
  return p;
}

VectorXd sufficient_statistic(const DistributionFamily& family, double x) {
  switch (family.kind()) {
    case FamilyKind::Gaussian1D: return VectorXd{{x, x * x}};
    case FamilyKind::Bernoulli: return VectorXd{{static_cast<double>(discrete_outcome(family, x))}};
    case FamilyKind::Categorical: {
      const int k = discrete_outcome(family, x);
      VectorXd t = VectorXd::Zero(family.dimension());
      if (k < family.dimension()) t(k) = 1.0;
      return t;
    }
  }
  return {};
}

double log_density(const DistributionFamily& family, const ParameterPoint& point, double x) {
  validate_point(family, point);
  if (family.kind() == FamilyKind::Gaussian1D) {
    require(std::isfinite(x), "x", "outcome outside the support");
    const RawGaussian g = raw_gaussian(point);
    const double z = (x - g.mu) / g.sigma;
    return -0.5 * std::log(2.0 * numerics::kPi) - std::log(g.sigma) - 0.5 * z * z;
  }
  if (point.chart == Chart::Natural)
    return point.coords.dot(sufficient_statistic(family, x)) - log_partition(family, point.coords);
  return std::log(probabilities(family, point)(discrete_outcome(family, x)));
}

VectorXd score(const DistributionFamily& family, const ParameterPoint& point, double x) {
  validate_point(family, point);
  if (point.chart == Chart::Raw) {
    require(std::isfinite(x), "x", "outcome outside the support");
    const RawGaussian g = raw_gaussian(point);
    const double d = x - g.mu;
    const double s2 = g.sigma * g.sigma;
    return VectorXd{{d / s2, (d * d - s2) / (s2 * g.sigma)}};
  }
  const VectorXd t = sufficient_statistic(family, x);
  if (point.chart == Chart::Natural) return t - log_partition_gradient(family, point.coords);
  return negative_entropy_hessian(family, point.coords) * (t - point.coords);
}

MatrixXd log_density_hessian(const DistributionFamily& family, const ParameterPoint& point,
                             double x) {
  validate_point(family, point);
  if (point.chart == Chart::Raw) {
    const RawGaussian g = raw_gaussian(point);
    const double d = x - g.mu;
    const double s2 = g.sigma * g.sigma;
    const double s3 = s2 * g.sigma;
    MatrixXd h(2, 2);
    h(0, 0) = -1.0 / s2;
    h(0, 1) = h(1, 0) = -2.0 * d / s3;
    h(1, 1) = -3.0 * d * d / (s2 * s2) + 1.0 / s2;
    return h;
  }
  if (point.chart == Chart::Natural) return -log_partition_hessian(family, point.coords);
  const VectorXd residual = sufficient_statistic(family, x) - point.coords;
  const std::vector<MatrixXd> phi3 = negative_entropy_third(family, point.coords);
  MatrixXd h = -negative_entropy_hessian(family, point.coords);
  for (int a = 0; a < family.dimension(); ++a) h += residual(a) * phi3[a];
  return h;
}

VectorXd sufficient_stat_mean(const DistributionFamily& family, const ParameterPoint& point) {
  if (point.chart == Chart::Raw) {
    throw ValidationError("chart", "family-not-exponential in raw chart; convert first");
  }
  validate_point(family, point);
  if (point.chart == Chart::Mean) return point.coords;
  return log_partition_gradient(family, point.coords);
}

double log_partition(const DistributionFamily& family, const VectorXd& theta) {
  switch (family.kind()) {
    case FamilyKind::Gaussian1D:
      return -theta(0) * theta(0) / (4.0 * theta(1)) + 0.5 * std::log(-numerics::kPi / theta(1));
    case FamilyKind::Bernoulli: return softplus(theta(0));
    case FamilyKind::Categorical: {
      const double m = std::max(0.0, theta.maxCoeff());
      double sum = std::exp(-m);
      for (Eigen::Index i = 0; i < theta.size(); ++i) sum += std::exp(theta(i) - m);
      return m + std::log(sum);
    }
  }
  return 0.0;
}

VectorXd log_partition_gradient(const DistributionFamily& family, const VectorXd& theta) {
  switch (family.kind()) {
    case FamilyKind::Gaussian1D: {
      const double t1 = theta(0), t2 = theta(1);
      return VectorXd{{-t1 / (2.0 * t2), t1 * t1 / (4.0 * t2 * t2) - 1.0 / (2.0 * t2)}};
    }
    case FamilyKind::Bernoulli: return VectorXd{{logistic(theta(0))}};
    case FamilyKind::Categorical: return softmax_with_reference(theta).head(theta.size());
  }
  return {};
}

MatrixXd log_partition_hessian(const DistributionFamily& family, const VectorXd& theta) {
  if (family.kind() == FamilyKind::Gaussian1D) {
    const double t1 = theta(0), t2 = theta(1);
    MatrixXd h(2, 2);
    h(0, 0) = -1.0 / (2.0 * t2);
    h(0, 1) = h(1, 0) = t1 / (2.0 * t2 * t2);
    h(1, 1) = -t1 * t1 / (2.0 * t2 * t2 * t2) + 1.0 / (2.0 * t2 * t2);
    return h;
  }
  const VectorXd eta = log_partition_gradient(family, theta);
  MatrixXd h = -eta * eta.transpose();
  h.diagonal() += eta;
  return h;
}

std::vector<MatrixXd> log_partition_third(const DistributionFamily& family,
                                          const VectorXd& theta) {
  const int d = family.dimension();
  std::vector<MatrixXd> out(d, MatrixXd::Zero(d, d));
  if (family.kind() == FamilyKind::Gaussian1D) {
    const double t1 = theta(0), t2 = theta(1);
    const double t2_2 = t2 * t2, t2_3 = t2_2 * t2;
    const double c112 = 1.0 / (2.0 * t2_2);
    const double c122 = -t1 / t2_3;
    const double c222 = 3.0 * t1 * t1 / (2.0 * t2_2 * t2_2) - 1.0 / t2_3;
    out[0](0, 0) = 0.0;
    out[0](0, 1) = out[0](1, 0) = out[1](0, 0) = c112;
    out[0](1, 1) = out[1](0, 1) = out[1](1, 0) = c122;
    out[1](1, 1) = c222;
    return out;
  }
  // Third cumulant of the indicator vector.
  const VectorXd eta = log_partition_gradient(family, theta);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double v = 2.0 * eta(i) * eta(j) * eta(k);
        if (i == j) v -= eta(i) * eta(k);
        if (i == k) v -= eta(i) * eta(j);
        if (j == k) v -= eta(i) * eta(j);
        if (i == j && j == k) v += eta(i);
        out[i](j, k) = v;
      }
  return out;
}

double negative_entropy(const DistributionFamily& family, const VectorXd& eta) {
  if (family.kind() == FamilyKind::Gaussian1D) {
    const double var = eta(1) - eta(0) * eta(0);
    return -0.5 * std::log(2.0 * numerics::kPi * std::exp(1.0) * var);
  }
  const double last = 1.0 - eta.sum();
  double v = last * std::log(last);
  for (Eigen::Index i = 0; i < eta.size(); ++i) v += eta(i) * std::log(eta(i));
  return v;
}

VectorXd negative_entropy_gradient(const DistributionFamily& family, const VectorXd& eta) {
  if (family.kind() == FamilyKind::Gaussian1D) {
    const double var = eta(1) - eta(0) * eta(0);
    return VectorXd{{eta(0) / var, -0.5 / var}};
  }
  const double log_last = std::log(1.0 - eta.sum());
  VectorXd g(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) g(i) = std::log(eta(i)) - log_last;
  return g;
}

MatrixXd negative_entropy_hessian(const DistributionFamily& family, const VectorXd& eta) {
  if (family.kind() == FamilyKind::Gaussian1D) {
    const double m = eta(0);
    const double var = eta(1) - m * m;
    MatrixXd h(2, 2);
    h(0, 0) = 1.0 / var + 2.0 * m * m / (var * var);
    h(0, 1) = h(1, 0) = -m / (var * var);
    h(1, 1) = 0.5 / (var * var);
    return h;
  }
  const double last = 1.0 - eta.sum();
  MatrixXd h = MatrixXd::Constant(eta.size(), eta.size(), 1.0 / last);
  h.diagonal() += eta.cwiseInverse();
  return h;
}

MatrixXd expectation(const DistributionFamily& family, const ParameterPoint& point,
                     const std::function<MatrixXd(double)>& f) {
  validate_point(family, point);
  if (family.kind() == FamilyKind::Gaussian1D) {
    const RawGaussian g = raw_gaussian(point);
    const numerics::HermiteRule& rule = numerics::standard_normal_rule();
    MatrixXd sum = rule.weights[0] * f(g.mu + g.sigma * rule.nodes[0]);
    for (std::size_t i = 1; i < rule.nodes.size(); ++i)
      sum += rule.weights[i] * f(g.mu + g.sigma * rule.nodes[i]);
    return sum;
  }
  const VectorXd p = probabilities(family, point);
  MatrixXd sum = p(0) * f(0.0);
  for (int k = 1; k < family.outcomes(); ++k) sum += p(k) * f(static_cast<double>(k));
  return sum;
}

}  // namespace dualgeo
