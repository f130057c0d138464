#include "dualgeo/berry.hpp"

#include <cmath>
#include <complex>

#include "dualgeo/error.hpp"
#include "dualgeo/numerics.hpp"

namespace dualgeo {

using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;
using numerics::kPi;

namespace {

constexpr double kCurvatureStep = 1e-3;
// |dn| above this flags a near-degenerate level.
constexpr double kDerivativeLimit = 1e6;

cd inner(const VectorXcd& a, const VectorXcd& b) { return a.dot(b); }  // conj(a) . b

// 4-point Gauss-Legendre on [-1, 1].
constexpr double kGlNodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
constexpr double kGlWeights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                  0.3478548451374538};

}  // namespace

VectorXcd StateFamily::state(const VectorXd& r) const {
  require(r.size() == parameter_dimension, "R", "parameter dimension mismatch");
  require(r.allFinite(), "R", "must be finite");
  VectorXcd n = evaluate(r);
  require(n.allFinite() && std::abs(n.squaredNorm() - 1.0) <= 1e-12, "state",
          "family returned a non-normalized state");
  return n;
}

StateFamily StateFamily::spin_half() {
  return {"spin-half", 2, [](const VectorXd& r) {
            VectorXcd n(2);
            n(0) = std::cos(0.5 * r(0));
            n(1) = std::polar(std::sin(0.5 * r(0)), r(1));
            return n;
          }};
}

StateFamily StateFamily::gauge_shifted(StateFamily base,
                                       std::function<double(const VectorXd&)> alpha) {
  StateFamily f;
  f.name = base.name + "-gauge";
  f.parameter_dimension = base.parameter_dimension;
  f.evaluate = [base = std::move(base), alpha = std::move(alpha)](const VectorXd& r) {
    return VectorXcd(std::polar(1.0, alpha(r)) * base.evaluate(r));
  };
  return f;
}

StateFamily StateFamily::real_qutrit() {
  return {"real", 2, [](const VectorXd& r) {
            const double s = std::sin(0.5 * r(0));
            VectorXcd n(3);
            n << std::cos(0.5 * r(0)), std::cos(r(1)) * s, std::sin(r(1)) * s;
            return n;
          }};
}

LoopPath LoopPath::latitude(double theta_c, int segments) {
  require(segments >= 8, "segments", "a loop needs at least 8 segments");
  require(std::isfinite(theta_c), "theta_c", "must be finite");
  LoopPath loop;
  loop.points.reserve(segments + 1);
  for (int k = 0; k < segments; ++k) {
    loop.points.push_back(VectorXd::Zero(2));
    loop.points.back() << theta_c, 2.0 * kPi * k / segments;
  }
  loop.points.push_back(loop.points.front());
  return loop;
}

LoopPath LoopPath::reversed() const {
  return {std::vector<VectorXd>(points.rbegin(), points.rend())};
}

SurfaceMesh SurfaceMesh::rectangle(double u0, double u1, double v0, double v1, int cells_u,
                                   int cells_v) {
  require(cells_u >= 1 && cells_v >= 1, "cells", "need at least one cell per side");
  require(u1 >= u0 && v1 >= v0, "mesh", "rectangle bounds must be ordered");
  SurfaceMesh m{u0, u1, v0, v1, cells_u, cells_v, {}, {}};
  const double hu = (u1 - u0) / cells_u;
  const double hv = (v1 - v0) / cells_v;
  for (int i = 0; i < cells_u; ++i)
    for (int j = 0; j < cells_v; ++j)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          m.nodes.emplace_back(u0 + hu * (i + 0.5 * (1.0 + kGlNodes[a])),
                               v0 + hv * (j + 0.5 * (1.0 + kGlNodes[b])));
          m.weights.push_back(0.25 * hu * hv * kGlWeights[a] * kGlWeights[b]);
        }
  return m;
}

SurfaceMesh SurfaceMesh::polar_cap(double theta_c, int cells_theta, int cells_phi) {
  return rectangle(0.0, theta_c, 0.0, 2.0 * kPi, cells_theta, cells_phi);
}

LoopPath SurfaceMesh::boundary(int per_side) const {
  require(per_side >= 2, "segments", "need at least 2 segments per side");
  LoopPath loop;
  auto push = [&](double u, double v) {
    VectorXd p(2);
    p << u, v;
    loop.points.push_back(p);
  };
  for (int k = 0; k < per_side; ++k) push(u0 + (u1 - u0) * k / per_side, v0);
  for (int k = 0; k < per_side; ++k) push(u1, v0 + (v1 - v0) * k / per_side);
  for (int k = 0; k < per_side; ++k) push(u1 - (u1 - u0) * k / per_side, v1);
  for (int k = 0; k < per_side; ++k) push(u0, v1 - (v1 - v0) * k / per_side);
  loop.points.push_back(loop.points.front());
  return loop;
}

ConnectionValue berry_connection(const StateFamily& family, const VectorXd& r) {
  const VectorXcd n = family.state(r);
  const int m = family.parameter_dimension;
  ConnectionValue out;
  out.a.resize(m);
  for (int mu = 0; mu < m; ++mu) {
    const double h = numerics::first_difference_step(r(mu));
    VectorXd plus = r, minus = r;
    plus(mu) += h;
    minus(mu) -= h;
    const VectorXcd dn = (family.state(plus) - family.state(minus)) / (2.0 * h);
    if (dn.norm() > kDerivativeLimit) {
      throw ValidationError("R", "degenerate state: derivative of the family blows up");
    }
    const cd value = cd(0.0, 1.0) * inner(n, dn);
    out.a(mu) = value.real();
    out.imaginary_residue = std::max(out.imaginary_residue, std::abs(value.imag()));
  }
  return out;
}

MatrixXd berry_curvature(const StateFamily& family, const VectorXd& r) {
  const int m = family.parameter_dimension;
  MatrixXd f = MatrixXd::Zero(m, m);
  const double h = kCurvatureStep;
  for (int mu = 0; mu < m; ++mu) {
    for (int nu = mu + 1; nu < m; ++nu) {
      VectorXd du = VectorXd::Zero(m), dv = VectorXd::Zero(m);
      du(mu) = 0.5 * h;
      dv(nu) = 0.5 * h;
      const VectorXcd n00 = family.state(r - du - dv);
      const VectorXcd n10 = family.state(r + du - dv);
      const VectorXcd n11 = family.state(r + du + dv);
      const VectorXcd n01 = family.state(r - du + dv);
      const cd product = inner(n00, n10) * inner(n10, n11) * inner(n11, n01) * inner(n01, n00);
      if (std::abs(product) < 1e-12) {
        throw ValidationError("R", "degenerate state: vanishing overlap in plaquette");
      }
      f(mu, nu) = -std::arg(product) / (h * h);
      f(nu, mu) = -f(mu, nu);
    }
  }
  return f;
}

LoopPhase berry_phase_loop(const StateFamily& family, const LoopPath& loop,
                           kernels::Policy policy) {
  require(loop.segments() >= 8, "loop", "a loop needs at least 8 segments");
  require((loop.points.front() - loop.points.back()).norm() <= 1e-12, "loop",
          "loop is not closed");
  const auto states = kernels::map_indices<VectorXcd>(
      loop.points.size(), [&](std::size_t k) { return family.state(loop.points[k]); }, policy);
  const auto overlaps = kernels::map_indices<cd>(
      static_cast<std::size_t>(loop.segments()),
      [&](std::size_t k) { return inner(states[k], states[k + 1]); }, policy);

  cd product(1.0, 0.0);
  double total = 0.0;
  for (const cd& z : overlaps) {
    if (std::abs(z) < 1e-12) throw ValidationError("loop", "vanishing overlap along loop");
    product *= z / std::abs(z);
    total -= std::arg(z);
  }
  LoopPhase out;
  out.principal = numerics::wrap_phase(-std::arg(product));
  out.total = total;
  out.winding = static_cast<int>(std::lround((total - out.principal) / (2.0 * kPi)));
  return out;
}

double berry_phase_surface(const StateFamily& family, const SurfaceMesh& mesh,
                           kernels::Policy policy) {
  require(family.parameter_dimension == 2, "mesh", "surface flux needs a 2-parameter family");
  require(mesh.nodes.size() == mesh.weights.size(), "mesh", "node and weight counts differ");
  const auto flux = kernels::map_indices<double>(
      mesh.nodes.size(),
      [&](std::size_t i) {
        return mesh.weights[i] * berry_curvature(family, mesh.nodes[i])(0, 1);
      },
      policy);
  double sum = 0.0;
  for (double value : flux) sum += value;
  return sum;
}

StokesReport stokes_check(const StateFamily& family, const SurfaceMesh& mesh,
                          const LoopPath& loop) {
  const double scale = std::max({1.0, std::abs(mesh.u1), std::abs(mesh.v1)});
  for (const VectorXd& p : loop.points) {
    require(p.size() == 2, "loop", "mesh-boundary mismatch: dimension");
    const double du = std::min(std::abs(p(0) - mesh.u0), std::abs(p(0) - mesh.u1));
    const double dv = std::min(std::abs(p(1) - mesh.v0), std::abs(p(1) - mesh.v1));
    const bool inside = p(0) >= mesh.u0 - 1e-10 * scale && p(0) <= mesh.u1 + 1e-10 * scale &&
                        p(1) >= mesh.v0 - 1e-10 * scale && p(1) <= mesh.v1 + 1e-10 * scale;
    require(inside && std::min(du, dv) <= 1e-10 * scale, "loop",
            "mesh-boundary mismatch: point off the perimeter");
  }
  StokesReport out;
  out.loop = berry_phase_loop(family, loop).total;
  out.surface = berry_phase_surface(family, mesh);
  out.discrepancy = std::abs(numerics::wrap_phase(out.loop - out.surface));
  return out;
}

}  // namespace dualgeo
