#include <doctest.h>

#include <cmath>

#include "dualgeo/error.hpp"
#include "dualgeo/infogeo.hpp"
#include "dualgeo/lengths.hpp"
#include "dualgeo/numerics.hpp"

using namespace dualgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double max_abs(const std::vector<MatrixXd>& gamma) {
  double m = 0.0;
  for (const auto& g : gamma) m = std::max(m, g.cwiseAbs().maxCoeff());
  return m;
}

double bernoulli_kl(double p, double q) {
  return p * std::log(p / q) + (1 - p) * std::log((1 - p) / (1 - q));
}

}  // namespace

TEST_CASE("Fisher metric examples") {
  const auto g = DistributionFamily::gaussian();
  const MatrixXd m = fisher_metric(g, {Chart::Raw, {0.0, 1.0}}).components;
  CHECK(m(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(m(0, 1)) < 1e-12);

  // Adaptive-quadrature oracle for E[s s^T].
  const ParameterPoint p{Chart::Raw, {0.4, 0.7}};
  const MatrixXd hermite = fisher_metric(g, p).components;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double oracle = numerics::integrate(
          [&](double x) {
            const VectorXd s = score(g, p, x);
            return std::exp(log_density(g, p, x)) * s(i) * s(j);
          },
          0.4 - 10 * 0.7, 0.4 + 10 * 0.7, 1e-13);
      CHECK(hermite(i, j) == doctest::Approx(oracle).epsilon(1e-9));
    }

  const auto b = DistributionFamily::bernoulli();
  CHECK(fisher_metric(b, {Chart::Mean, {0.5}}).components(0, 0) == doctest::Approx(4.0));

  for (double sigma : {1.0, 0.1, 0.01}) {
    const double gss = fisher_metric(g, {Chart::Raw, {0.0, sigma}}).components(1, 1);
    CHECK(std::abs(gss / (2.0 / (sigma * sigma)) - 1.0) < 1e-6);
  }

  // Hessian-of-potential route in the natural chart.
  const auto c = DistributionFamily::categorical(4);
  const VectorXd theta = (VectorXd(3) << 0.3, -0.2, 0.9).finished();
  CHECK((fisher_metric(c, {Chart::Natural, theta}).components -
         log_partition_hessian(c, theta))
            .norm() < 1e-12);
  const VectorXd gt = (VectorXd(2) << 0.5, -0.7).finished();
  CHECK((fisher_metric(g, {Chart::Natural, gt}).components - log_partition_hessian(g, gt))
            .norm() < 1e-6);
  CHECK_THROWS_AS(fisher_metric(b, {Chart::Mean, {0.0}}), ValidationError);
}

TEST_CASE("Legendre dual") {
  const auto b = DistributionFamily::bernoulli();
  const PotentialPair pot = PotentialPair::exponential(b);
  const LegendreResult r = legendre_dual(pot, {Chart::Natural, {0.0}});
  CHECK(r.eta.coords(0) == doctest::Approx(0.5));
  CHECK(r.phi_value == doctest::Approx(-std::log(2.0)));
  const LegendreResult big = legendre_dual(pot, {Chart::Natural, {30.0}});
  CHECK(big.eta.coords(0) == doctest::Approx(1.0));
  CHECK(std::abs(big.phi_value) < 1e-10);

  const PotentialPair quad = PotentialPair::quadratic(2);
  const LegendreResult q = legendre_dual(quad, {Chart::Natural, {1.5, -0.5}});
  CHECK(q.eta.coords(0) == doctest::Approx(1.5));
  CHECK(q.phi_value == doctest::Approx(0.5 * (2.25 + 0.25)));

  // Round trip on grids.
  for (const auto& fam : {DistributionFamily::bernoulli(), DistributionFamily::categorical(3),
                          DistributionFamily::gaussian()}) {
    const PotentialPair p = PotentialPair::exponential(fam);
    for (double u : {-1.5, -0.3, 0.4, 1.2}) {
      for (double v : {-1.0, -0.2, 0.8}) {
        VectorXd theta(fam.dimension());
        if (fam.dimension() == 1) theta << u;
        else if (fam.kind() == FamilyKind::Gaussian1D) theta << u, -std::abs(v) - 0.1;
        else theta << u, v;
        const LegendreResult lr = legendre_dual(p, {Chart::Natural, theta});
        CHECK((p.grad_phi(lr.eta.coords) - theta).norm() <= 1e-8);
      }
    }
  }

  // phi built numerically from the supremum agrees with the closed form.
  const PotentialPair numeric = PotentialPair::from_primal(
      "softplus", 1, pot.psi, pot.grad_psi, pot.hess_psi);
  const VectorXd eta = (VectorXd(1) << 0.3).finished();
  CHECK(numeric.phi(eta) == doctest::Approx(pot.phi(eta)).epsilon(1e-10));
  CHECK_THROWS_AS(legendre_dual(pot, {Chart::Mean, {0.5}}), ValidationError);
}

TEST_CASE("Bregman and KL") {
  const auto b = DistributionFamily::bernoulli();
  const PotentialPair pot = PotentialPair::exponential(b);
  CHECK(std::abs(bregman_divergence(pot, {Chart::Natural, {0.0}}, {Chart::Mean, {0.5}})) < 1e-15);
  CHECK(bregman_divergence(pot, {Chart::Natural, {0.0}}, {Chart::Mean, {0.9}}) ==
        doctest::Approx(std::log(2.0) + 0.9 * std::log(0.9) + 0.1 * std::log(0.1)));
  CHECK(bregman_divergence(pot, {Chart::Natural, {0.0}}, {Chart::Mean, {0.9}}) ==
        doctest::Approx(0.368).epsilon(1e-3));
  CHECK_THROWS_AS(bregman_divergence(pot, {Chart::Mean, {0.5}}, {Chart::Mean, {0.5}}),
                  ValidationError);

  const auto g = DistributionFamily::gaussian();
  CHECK(kl_divergence(g, {Chart::Raw, {0.0, 1.0}}, {Chart::Raw, {1.0, 1.0}}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // Closed-form Gaussian KL.
  auto gauss_kl = [](double m1, double s1, double m2, double s2) {
    return std::log(s2 / s1) + (s1 * s1 + (m1 - m2) * (m1 - m2)) / (2 * s2 * s2) - 0.5;
  };
  CHECK(kl_divergence(g, {Chart::Raw, {0.3, 0.5}}, {Chart::Raw, {-1.0, 2.0}}) ==
        doctest::Approx(gauss_kl(0.3, 0.5, -1.0, 2.0)).epsilon(1e-12));
  CHECK(kl_divergence(b, {Chart::Mean, {0.5}}, {Chart::Mean, {0.75}}) ==
        doctest::Approx(0.5 * std::log(2.0 / 3.0) + 0.5 * std::log(2.0)));
  CHECK(kl_divergence(b, {Chart::Mean, {0.3}}, {Chart::Mean, {0.3}}) == 0.0);
  CHECK(std::isinf(kl_divergence(b, {Chart::Mean, {0.5}}, {Chart::Mean, {0.0}})));

  // Bregman(theta_Q, eta_P) = KL(P || Q) on a 5x5 grid.
  const auto c = DistributionFamily::categorical(3);
  const PotentialPair cp = PotentialPair::exponential(c);
  const double grid[5] = {-1.0, -0.4, 0.0, 0.5, 1.1};
  for (double u : grid)
    for (double v : grid) {
      const ParameterPoint q{Chart::Natural, {u, v}};
      const ParameterPoint p{Chart::Natural, {v, -u}};
      const double kl = kl_divergence(c, p, q);
      const double br = bregman_divergence(cp, q, to_chart(c, p, Chart::Mean));
      CHECK(std::abs(kl - br) <= 1e-8);
      CHECK(kl >= 0.0);
    }
  for (double u : grid)
    for (double v : grid) {
      const ParameterPoint q{Chart::Natural, {u, -0.3 - 0.2 * std::abs(v)}};
      const ParameterPoint p{Chart::Natural, {v, -0.5 - 0.1 * std::abs(u)}};
      const double br = bregman_divergence(PotentialPair::exponential(g), q,
                                           to_chart(g, p, Chart::Mean));
      CHECK(std::abs(kl_divergence(g, p, q) - br) <= 1e-8);
    }
}

TEST_CASE("Pythagorean gap") {
  const auto c = DistributionFamily::categorical(3);
  const ParameterPoint p{Chart::Mean, {0.5, 0.3}};
  const ParameterPoint q{Chart::Mean, {0.2, 0.5}};
  // R: exponential tilt of Q along the first indicator with E_R[1_0] = P_0,
  // found by bisection on the tilt.
  auto tilt = [&](double t) {
    const double w0 = 0.2 * std::exp(t), w1 = 0.5, w2 = 0.3;
    const double z = w0 + w1 + w2;
    return VectorXd((VectorXd(2) << w0 / z, w1 / z).finished());
  };
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tilt(mid)(0) < 0.5 ? lo : hi) = mid;
  }
  const ParameterPoint r{Chart::Mean, tilt(0.5 * (lo + hi))};
  CHECK(r.coords(1) == doctest::Approx(0.3125).epsilon(1e-9));
  CHECK(std::abs(pythagorean_gap(c, p, r, q)) <= 1e-8);
  CHECK(std::abs(pythagorean_orthogonality(c, p, r, q)) <= 1e-8);

  const auto b = DistributionFamily::bernoulli();
  const double gap = pythagorean_gap(b, {Chart::Mean, {0.6}}, {Chart::Mean, {0.5}},
                                     {Chart::Mean, {0.3}});
  const double oracle = bernoulli_kl(0.6, 0.5) + bernoulli_kl(0.5, 0.3) - bernoulli_kl(0.6, 0.3);
  CHECK(gap == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(std::abs(gap) > 1e-3);
  CHECK(pythagorean_gap(b, {Chart::Mean, {0.6}}, {Chart::Mean, {0.6}}, {Chart::Mean, {0.3}}) ==
        doctest::Approx(0.0));
}

TEST_CASE("dual metrics") {
  const auto b = DistributionFamily::bernoulli();
  const DualMetrics d = dual_metrics(PotentialPair::exponential(b), {Chart::Natural, {0.0}});
  CHECK(d.g.components(0, 0) == doctest::Approx(0.25));
  CHECK(d.g_star.components(0, 0) == doctest::Approx(4.0));
  const DualMetrics q = dual_metrics(PotentialPair::quadratic(2), {Chart::Natural, {0.3, 0.1}});
  CHECK((q.g.components - MatrixXd::Identity(2, 2)).norm() < 1e-15);
  CHECK((q.g_star.components - MatrixXd::Identity(2, 2)).norm() < 1e-15);

  const auto c = DistributionFamily::categorical(3);
  const DualMetrics u = dual_metrics(PotentialPair::exponential(c), {Chart::Natural, {0.0, 0.0}});
  CHECK((u.g.components * u.g_star.components - MatrixXd::Identity(2, 2)).norm() < 1e-8);
  // Finite-difference Hessian cross-check of g*.
  const auto [gk, gk_star] = divergence_metrics(c, {Chart::Mean, {1.0 / 3.0, 1.0 / 3.0}});
  CHECK((gk - u.g_star.components).norm() < 1e-5 * u.g_star.components.norm());
  CHECK((gk_star - u.g_star.components).norm() < 1e-5 * u.g_star.components.norm());
}

TEST_CASE("alpha connections") {
  const auto b = DistributionFamily::bernoulli();
  for (double theta : {-2.0, 0.0, 1.3})
    CHECK(max_abs(christoffel(b, {Chart::Natural, {theta}}, 1.0).components) < 1e-6);
  for (double eta : {0.1, 0.5, 0.8}) {
    CHECK(max_abs(christoffel(b, {Chart::Mean, {eta}}, -1.0).components) < 1e-6);
    const double e = christoffel(b, {Chart::Mean, {eta}}, 1.0).components[0](0, 0);
    CHECK(e == doctest::Approx((2 * eta - 1) / (eta * (1 - eta))).epsilon(1e-8));
  }
  CHECK(std::abs(christoffel(b, {Chart::Mean, {0.5}}, 1.0).components[0](0, 0)) < 1e-10);

  const auto c = DistributionFamily::categorical(3);
  const auto g = DistributionFamily::gaussian();
  CHECK(max_abs(christoffel(c, {Chart::Natural, {0.2, -0.4}}, 1.0).components) < 1e-6);
  CHECK(max_abs(christoffel(c, {Chart::Mean, {0.2, 0.5}}, -1.0).components) < 1e-6);
  CHECK(max_abs(christoffel(g, {Chart::Natural, {0.4, -0.7}}, 1.0).components) < 1e-6);
  CHECK(max_abs(christoffel(g, {Chart::Mean, {0.4, 1.2}}, -1.0).components) < 1e-6);

  // d_k g_ij = Gamma^(a)_{ki,j} + Gamma^(-a)_{kj,i}, lowered[j](k, i).
  for (const ParameterPoint& x : {ParameterPoint{Chart::Raw, {0.3, 0.8}},
                                  ParameterPoint{Chart::Mean, {0.2, 0.5}}}) {
    const DistributionFamily& fam = x.chart == Chart::Raw ? g : c;
    for (double alpha : {-0.5, 0.0, 1.0}) {
      const auto plus = christoffel_lowered(fam, x, alpha);
      const auto minus = christoffel_lowered(fam, x, -alpha);
      for (int k = 0; k < 2; ++k) {
        const double h = 1e-5;
        ParameterPoint up = x, down = x;
        up.coords(k) += h;
        down.coords(k) -= h;
        const MatrixXd dg =
            (fisher_metric(fam, up).components - fisher_metric(fam, down).components) / (2 * h);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            CHECK(std::abs(dg(i, j) - plus[j](k, i) - minus[i](k, j)) <=
                  1e-5 * std::max(1.0, std::abs(dg(i, j))));
      }
    }
  }
}

TEST_CASE("rotations of metrics and connections") {
  MetricTensor g;
  g.chart = Chart::Natural;
  g.at = {Chart::Natural, {0.0, 0.0}};
  g.components = (MatrixXd(2, 2) << 1.0, 0.0, 0.0, 2.0).finished();
  const MetricTensor same = transform_metric(g, RotationMap::identity(2));
  CHECK((same.components - g.components).norm() == 0.0);
  const MetricTensor rot = transform_metric(g, RotationMap::planar(2, 0, 1, numerics::kPi / 2));
  CHECK(rot.components(0, 0) == doctest::Approx(2.0));
  CHECK(rot.components(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(rot.components(0, 1)) < 1e-15);

  // Eigenvalues are preserved.
  const MatrixXd a = (MatrixXd(2, 2) << 2.0, 0.3, 0.3, 1.0).finished();
  g.components = a;
  const MetricTensor r2 = transform_metric(g, RotationMap::planar(2, 0, 1, 0.7));
  Eigen::SelfAdjointEigenSolver<MatrixXd> e1(a), e2(r2.components);
  CHECK((e1.eigenvalues() - e2.eigenvalues()).norm() < 1e-14);

  // Arc length of a curve under g equals that of the rotated curve under R g R^T.
  const RotationMap rm = RotationMap::planar(2, 0, 1, 0.9);
  auto metric = [](const VectorXd& x) {
    return MatrixXd((MatrixXd(2, 2) << 1.0 + x(0) * x(0), 0.2, 0.2, 2.0 + x(1) * x(1)).finished());
  };
  auto curve = [](double t) { return VectorXd((VectorXd(2) << t, std::sin(3 * t)).finished()); };
  const ParamPath path = ParamPath::sampled(Chart::Natural, curve, 401, [](double t) {
    return VectorXd((VectorXd(2) << 1.0, 3 * std::cos(3 * t)).finished());
  });
  const ParamPath rotated = ParamPath::sampled(
      Chart::Natural, [&](double t) { return transform_point(curve(t), rm); }, 401,
      [&](double t) {
        return VectorXd(rm.matrix * (VectorXd(2) << 1.0, 3 * std::cos(3 * t)).finished());
      });
  const double l1 = metric_length(path, metric);
  const double l2 = metric_length(rotated, [&](const VectorXd& y) {
    MetricTensor m;
    m.at = {Chart::Natural, VectorXd(rm.matrix.transpose() * y)};
    m.components = metric(rm.matrix.transpose() * y);
    return transform_metric(m, rm).components;
  });
  CHECK(std::abs(l1 - l2) <= 1e-10);

  // Connections.
  ChristoffelArray gamma;
  gamma.chart = Chart::Natural;
  gamma.at = {Chart::Natural, {0.0, 0.0}};
  gamma.components = {MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2)};
  CHECK(max_abs(transform_christoffel(gamma, rm).components) == 0.0);
  const auto c = DistributionFamily::categorical(3);
  const ChristoffelArray lc = christoffel(c, {Chart::Mean, {0.2, 0.5}}, 0.0);
  const ChristoffelArray id = transform_christoffel(lc, RotationMap::identity(2));
  for (int i = 0; i < 2; ++i) CHECK((id.components[i] - lc.components[i]).norm() < 1e-15);
  const ChristoffelArray tr = transform_christoffel(lc, rm);
  for (int i = 0; i < 2; ++i)
    CHECK((tr.components[i] - tr.components[i].transpose()).norm() < 1e-12);

  RotationMap moving = rm;
  moving.position_dependent = true;
  CHECK_THROWS_AS(transform_christoffel(lc, moving), ValidationError);
}

TEST_CASE("rotated connection maps geodesics to geodesics") {
  // Product of two Bernoulli manifolds in the natural-chart-free mean chart:
  // each factor contributes Gamma^i_ii = (2 eta_i - 1) / (2 eta_i (1 - eta_i)).
  auto connection = [](const VectorXd& x) {
    ChristoffelArray g;
    g.chart = Chart::Mean;
    g.at = {Chart::Mean, x};
    g.components = {MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2)};
    for (int i = 0; i < 2; ++i)
      g.components[i](i, i) = (2 * x(i) - 1) / (2 * x(i) * (1 - x(i)));
    return g;
  };
  const RotationMap rm = RotationMap::planar(2, 0, 1, numerics::kPi / 4);
  const VectorXd start = (VectorXd(2) << 0.3, 0.6).finished();
  const VectorXd velocity = (VectorXd(2) << 0.2, -0.15).finished();
  const ParamPath original = integrate_geodesic(Chart::Mean, connection, start, velocity, 401);
  const ParamPath image = integrate_geodesic(
      Chart::Mean,
      [&](const VectorXd& y) {
        return transform_christoffel(connection(rm.matrix.transpose() * y), rm);
      },
      rm.matrix * start, rm.matrix * velocity, 401);
  double gap = 0.0;
  for (int k = 0; k < original.size(); ++k)
    gap = std::max(gap, (rm.matrix * original.samples[k] - image.samples[k]).norm());
  CHECK(gap < 1e-6);
}
