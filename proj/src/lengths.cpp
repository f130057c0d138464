#include "dualgeo/lengths.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "dualgeo/error.hpp"
#include "dualgeo/numerics.hpp"

namespace dualgeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void validate_path(const ParamPath& path) {
  require(path.size() >= 2, "path", "needs at least 2 samples");
  const Eigen::Index d = path.samples.front().size();
  for (const VectorXd& x : path.samples)
    require(x.size() == d && x.allFinite(), "path", "samples must be finite and equal-sized");
  if (path.velocities) {
    require(static_cast<int>(path.velocities->size()) == path.size(), "path",
            "velocity count does not match sample count");
  }
}

// Evaluates integrand(x_i, v_i) at every sample and integrates.
double path_integral(const ParamPath& path,
                     const std::function<double(const VectorXd&, const VectorXd&)>& integrand,
                     kernels::Policy policy) {
  validate_path(path);
  const std::vector<VectorXd> velocity = path_velocities(path);
  const std::vector<double> values = kernels::map_indices<double>(
      path.samples.size(), [&](std::size_t i) { return integrand(path.samples[i], velocity[i]); },
      policy);
  return numerics::trapezoid(values, path.spacing());
}

double quadratic_speed(const MatrixXd& g, const VectorXd& v) {
  return std::sqrt(std::max(0.0, v.dot(g * v)));
}

MatrixXd checked_inverse(const MatrixXd& m, const char* field) {
  Eigen::LLT<MatrixXd> llt(m);
  require(m.allFinite() && llt.info() == Eigen::Success, field, "singular metric");
  return llt.solve(MatrixXd::Identity(m.rows(), m.cols()));
}

// Carries a path between charts. Natural <-> mean velocities follow the
// Jacobians (Hess psi, Hess phi); other conversions fall back to finite
// differences.
ParamPath convert_path(const ParamPath& path, const DistributionFamily& family, Chart target) {
  if (path.chart == target) return path;
  ParamPath out;
  out.chart = target;
  out.samples.reserve(path.samples.size());
  for (const VectorXd& x : path.samples)
    out.samples.push_back(to_chart(family, {path.chart, x}, target).coords);
  if (path.velocities) {
    std::vector<VectorXd> v;
    v.reserve(path.samples.size());
    if (path.chart == Chart::Natural && target == Chart::Mean) {
      for (std::size_t i = 0; i < path.samples.size(); ++i)
        v.push_back(log_partition_hessian(family, path.samples[i]) * (*path.velocities)[i]);
      out.velocities = std::move(v);
    } else if (path.chart == Chart::Mean && target == Chart::Natural) {
      for (std::size_t i = 0; i < path.samples.size(); ++i)
        v.push_back(negative_entropy_hessian(family, path.samples[i]) * (*path.velocities)[i]);
      out.velocities = std::move(v);
    }
  }
  return out;
}

}  // namespace

ParamPath ParamPath::line(Chart chart, const VectorXd& from, const VectorXd& to, int count) {
  require(count >= 2, "samples", "needs at least 2 samples");
  require(from.size() == to.size(), "path", "endpoint dimensions differ");
  ParamPath path;
  path.chart = chart;
  path.samples.reserve(count);
  const VectorXd delta = to - from;
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    path.samples.push_back(i == count - 1 ? to : VectorXd(from + t * delta));
  }
  path.velocities = std::vector<VectorXd>(count, delta);
  return path;
}

ParamPath ParamPath::sampled(Chart chart, const std::function<VectorXd(double)>& curve, int count,
                             const std::function<VectorXd(double)>& derivative) {
  require(count >= 2, "samples", "needs at least 2 samples");
  ParamPath path;
  path.chart = chart;
  path.samples.reserve(count);
  std::vector<VectorXd> v;
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    path.samples.push_back(curve(t));
    if (derivative) v.push_back(derivative(t));
  }
  if (derivative) path.velocities = std::move(v);
  return path;
}

std::vector<VectorXd> path_velocities(const ParamPath& path) {
  validate_path(path);
  if (path.velocities) return *path.velocities;
  const std::vector<VectorXd>& x = path.samples;
  const int n = path.size();
  const double h = path.spacing();
  std::vector<VectorXd> v(n);
  if (n == 2) {
    v[0] = v[1] = (x[1] - x[0]) / h;
    return v;
  }
  v[0] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * h);
  v[n - 1] = (3.0 * x[n - 1] - 4.0 * x[n - 2] + x[n - 3]) / (2.0 * h);
  for (int i = 1; i + 1 < n; ++i) v[i] = (x[i + 1] - x[i - 1]) / (2.0 * h);
  return v;
}

double metric_length(const ParamPath& path, const MetricField& metric, kernels::Policy policy) {
  return path_integral(
      path, [&](const VectorXd& x, const VectorXd& v) { return quadratic_speed(metric(x), v); },
      policy);
}

double primal_length(const ParamPath& path, const DistributionFamily& family,
                     kernels::Policy policy) {
  return metric_length(
      path,
      [&](const VectorXd& x) { return fisher_metric(family, {path.chart, x}).components; },
      policy);
}

double primal_length(const ParamPath& path, const PotentialPair& pot, kernels::Policy policy) {
  require(path.chart == Chart::Natural, "path", "chart-mismatch: expected primal chart");
  return metric_length(path, pot.hess_psi, policy);
}

double dual_length(const ParamPath& path, const PotentialPair& pot, kernels::Policy policy) {
  require(path.chart == Chart::Natural || path.chart == Chart::Mean, "path",
          "chart-conversion failure: path must be primal or dual");
  if (path.chart == Chart::Mean) return metric_length(path, pot.hess_phi, policy);

  ParamPath image;
  image.chart = Chart::Mean;
  image.samples.reserve(path.samples.size());
  for (const VectorXd& theta : path.samples) {
    require(pot.primal_domain(theta), "path", "chart-conversion failure: outside the domain");
    image.samples.push_back(pot.grad_psi(theta));
  }
  if (path.velocities) {
    std::vector<VectorXd> v;
    for (std::size_t i = 0; i < path.samples.size(); ++i)
      v.push_back(pot.hess_psi(path.samples[i]) * (*path.velocities)[i]);
    image.velocities = std::move(v);
  }
  return metric_length(image, pot.hess_phi, policy);
}

double harmonic_length(const ParamPath& path, const MetricField& g, const MetricField& g_star,
                       kernels::Policy policy) {
  return metric_length(
      path,
      [&](const VectorXd& x) {
        const MatrixXd sum = checked_inverse(g(x), "g") + checked_inverse(g_star(x), "g_star");
        return MatrixXd(2.0 * checked_inverse(sum, "g"));
      },
      policy);
}

std::pair<MatrixXd, MatrixXd> divergence_metrics(const DistributionFamily& family,
                                                 const ParameterPoint& point) {
  validate_point(family, point);
  const int d = family.dimension();
  VectorXd h(d);
  for (int i = 0; i < d; ++i) h(i) = numerics::second_difference_step(point.coords(i));

  auto kl_shift = [&](const VectorXd& du, const VectorXd& dv) {
    return kl_divergence(family, {point.chart, point.coords + du},
                         {point.chart, point.coords + dv});
  };
  const VectorXd zero = VectorXd::Zero(d);
  // Hessian in one argument of the divergence; the other is held at `point`.
  auto hessian = [&](bool first) {
    auto f = [&](const VectorXd& step) { return first ? kl_shift(step, zero) : kl_shift(zero, step); };
    MatrixXd out(d, d);
    for (int i = 0; i < d; ++i) {
      VectorXd ei = VectorXd::Zero(d);
      ei(i) = h(i);
      out(i, i) = (f(ei) + f(-ei)) / (h(i) * h(i));
      for (int j = 0; j < i; ++j) {
        VectorXd ej = VectorXd::Zero(d);
        ej(j) = h(j);
        out(i, j) = out(j, i) =
            (f(ei + ej) - f(ei - ej) - f(ej - ei) + f(-ei - ej)) / (4.0 * h(i) * h(j));
      }
    }
    return out;
  };
  return {hessian(true), hessian(false)};
}

double divergence_length(const ParamPath& path, const DistributionFamily& family,
                         kernels::Policy policy) {
  return metric_length(
      path,
      [&](const VectorXd& x) {
        const auto [g, g_star] = divergence_metrics(family, {path.chart, x});
        return MatrixXd(g + g_star);
      },
      policy);
}

double divergence_length_second_derivative(const ParamPath& path,
                                           const DistributionFamily& family,
                                           kernels::Policy policy) {
  return path_integral(
      path,
      [&](const VectorXd& x, const VectorXd& v) {
        const double speed = v.norm();
        if (speed == 0.0) return 0.0;
        // Step along the unit direction, then rescale by speed^2.
        const VectorXd u = v / speed;
        const double tau = numerics::second_difference_step(x.cwiseAbs().maxCoeff());
        auto symmetric = [&](double s) {
          const ParameterPoint here{path.chart, x};
          const ParameterPoint there{path.chart, x + s * u};
          return kl_divergence(family, there, here) + kl_divergence(family, here, there);
        };
        const double second = (symmetric(tau) + symmetric(-tau)) / (tau * tau);
        return speed * std::sqrt(std::max(0.0, second));
      },
      policy);
}

LengthReport length_report(const ParamPath& path, const DistributionFamily& family) {
  LengthReport report;
  report.grid_size = path.size();
  report.primal = primal_length(path, family);
  report.divergence_based = divergence_length(path, family);

  const PotentialPair pot = PotentialPair::exponential(family);
  const ParamPath natural = convert_path(path, family, Chart::Natural);
  report.dual = dual_length(natural, pot);
  report.harmonic = harmonic_length(natural, pot.hess_psi, [&](const VectorXd& theta) {
    return pot.hess_phi(pot.grad_psi(theta));
  });
  return report;
}

ParamPath integrate_geodesic(Chart chart,
                             const std::function<ChristoffelArray(const VectorXd&)>& connection,
                             const VectorXd& start, const VectorXd& velocity, int count) {
  require(count >= 2, "samples", "needs at least 2 samples");
  const int d = static_cast<int>(start.size());
  auto acceleration = [&](const VectorXd& x, const VectorXd& v) {
    const ChristoffelArray gamma = connection(x);
    VectorXd a(d);
    for (int i = 0; i < d; ++i) a(i) = -v.dot(gamma.components[i] * v);
    return a;
  };

  ParamPath path;
  path.chart = chart;
  std::vector<VectorXd> velocities;
  path.samples.reserve(count);
  velocities.reserve(count);
  VectorXd x = start;
  VectorXd v = velocity;
  path.samples.push_back(x);
  velocities.push_back(v);
  const double h = 1.0 / (count - 1);
  for (int step = 1; step < count; ++step) {
    const VectorXd k1x = v;
    const VectorXd k1v = acceleration(x, v);
    const VectorXd k2x = v + 0.5 * h * k1v;
    const VectorXd k2v = acceleration(x + 0.5 * h * k1x, k2x);
    const VectorXd k3x = v + 0.5 * h * k2v;
    const VectorXd k3v = acceleration(x + 0.5 * h * k2x, k3x);
    const VectorXd k4x = v + h * k3v;
    const VectorXd k4v = acceleration(x + h * k3x, k4x);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    path.samples.push_back(x);
    velocities.push_back(v);
  }
  path.velocities = std::move(velocities);
  return path;
}

ParamPath geodesic(const DistributionFamily& family, const ParameterPoint& from,
                   const ParameterPoint& to, double alpha, int count) {
  require(from.chart == to.chart, "to", "endpoints must share a chart");
  validate_point(family, from);
  validate_point(family, to);
  require(alpha == 1.0 || alpha == -1.0 || alpha == 0.0, "alpha", "must be -1, 0 or 1");
  require(count >= 2, "samples", "needs at least 2 samples");
  const Chart chart = from.chart;

  if (from.coords == to.coords) {
    return ParamPath::line(chart, from.coords, to.coords, count);
  }
  if (alpha != 0.0) {
    const Chart flat = alpha == 1.0 ? Chart::Natural : Chart::Mean;
    const ParamPath straight = ParamPath::line(flat, to_chart(family, from, flat).coords,
                                               to_chart(family, to, flat).coords, count);
    return convert_path(straight, family, chart);
  }

  auto connection = [&](const VectorXd& x) { return christoffel(family, {chart, x}, 0.0); };
  auto shoot = [&](const VectorXd& v) {
    return integrate_geodesic(chart, connection, from.coords, v, count);
  };
  auto miss = [&](const ParamPath& p) -> VectorXd { return p.samples.back() - to.coords; };
  auto try_shoot = [&](const VectorXd& v, ParamPath& out) {
    try {
      out = shoot(v);
      return out.samples.back().allFinite();
    } catch (const ValidationError&) {
      return false;
    }
  };

  const int d = family.dimension();
  const double target_scale = std::max(1.0, to.coords.norm());
  VectorXd v = to.coords - from.coords;
  ParamPath best;
  if (!try_shoot(v, best)) throw NonConvergenceError("geodesic", "shooting-no-convergence");
  double residual = miss(best).norm();

  for (int iter = 0; iter < 50 && residual > 1e-12 * target_scale; ++iter) {
    MatrixXd jacobian(d, d);
    const double dv = 1e-7 * std::max(1.0, v.norm());
    for (int k = 0; k < d; ++k) {
      VectorXd vk = v;
      vk(k) += dv;
      ParamPath probe;
      if (!try_shoot(vk, probe)) {
        vk(k) = v(k) - dv;
        if (!try_shoot(vk, probe)) throw NonConvergenceError("geodesic", "shooting-no-convergence");
        jacobian.col(k) = (miss(best) - miss(probe)) / dv;
      } else {
        jacobian.col(k) = (miss(probe) - miss(best)) / dv;
      }
    }
    const VectorXd step = jacobian.fullPivLu().solve(-miss(best));
    bool accepted = false;
    for (double scale = 1.0; scale > 1e-6; scale *= 0.5) {
      ParamPath trial;
      const VectorXd candidate = v + scale * step;
      if (try_shoot(candidate, trial) && miss(trial).norm() < residual) {
        v = candidate;
        best = std::move(trial);
        residual = miss(best).norm();
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (residual > 1e-6 * target_scale) {
    throw NonConvergenceError("geodesic", "shooting-no-convergence");
  }
  best.samples.back() = to.coords;
  return best;
}

}  // namespace dualgeo
