#pragma once

// Berry connection, curvature and geometric phase of parametrized state
// families, with a loop-versus-flux (Stokes) check.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualgeo/kernels.hpp"

namespace dualgeo {

struct StateFamily {
  using Evaluator = std::function<Eigen::VectorXcd(const Eigen::VectorXd&)>;

  std::string name;
  int parameter_dimension = 0;
  Evaluator evaluate;

  /// Normalized state at R; rejects non-normalized evaluator output.
  Eigen::VectorXcd state(const Eigen::VectorXd& r) const;

  /// |n(theta, phi)> = (cos(theta/2), e^{i phi} sin(theta/2)).
  static StateFamily spin_half();
  /// e^{i alpha(R)} |n(R)> for a smooth real phase field alpha.
  static StateFamily gauge_shifted(StateFamily base,
                                   std::function<double(const Eigen::VectorXd&)> alpha);
  /// (cos(theta/2), cos(phi) sin(theta/2), sin(phi) sin(theta/2)): all real.
  static StateFamily real_qutrit();
};

/// Closed polyline R_0 ... R_K with R_K = R_0.
struct LoopPath {
  std::vector<Eigen::VectorXd> points;

  int segments() const { return static_cast<int>(points.size()) - 1; }

  /// theta = theta_c, phi from 0 to 2 pi, in K segments.
  static LoopPath latitude(double theta_c, int segments);
  LoopPath reversed() const;
};

/// Rectangle [u0, u1] x [v0, v1] of a 2-parameter family, cut into cells
/// with a tensor Gauss-Legendre rule per cell.
struct SurfaceMesh {
  double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 0.0;
  int cells_u = 1, cells_v = 1;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<double> weights;

  static SurfaceMesh rectangle(double u0, double u1, double v0, double v1, int cells_u,
                               int cells_v);
  /// Counterclockwise perimeter (u increasing first) with `per_side` segments
  /// on each edge.
  LoopPath boundary(int per_side) const;
  /// Polar cap theta in [0, theta_c], phi in [0, 2 pi].
  static SurfaceMesh polar_cap(double theta_c, int cells_theta = 16, int cells_phi = 16);
};

struct ConnectionValue {
  Eigen::VectorXd a;       // A_mu = Re i <n | d_mu n>
  double imaginary_residue = 0.0;
};

struct LoopPhase {
  double principal = 0.0;  // in (-pi, pi]
  double total = 0.0;      // sum of the per-segment phases
  int winding = 0;         // (total - principal) / 2 pi
};

struct StokesReport {
  double loop = 0.0;
  double surface = 0.0;
  double discrepancy = 0.0;  // |loop - surface| reduced mod 2 pi
};

ConnectionValue berry_connection(const StateFamily& family, const Eigen::VectorXd& r);

/// F_{mu nu} from the phase of the four-overlap product around a small
/// centred square.
Eigen::MatrixXd berry_curvature(const StateFamily& family, const Eigen::VectorXd& r);

/// gamma = -arg prod <n(R_k)|n(R_{k+1})>.
LoopPhase berry_phase_loop(const StateFamily& family, const LoopPath& loop,
                           kernels::Policy policy = kernels::Policy::Parallel);

/// Quadrature of F_{uv} over the mesh.
double berry_phase_surface(const StateFamily& family, const SurfaceMesh& mesh,
                           kernels::Policy policy = kernels::Policy::Parallel);

/// Loop phase of `loop` against the flux through `mesh`. The loop must lie on
/// the mesh perimeter.
StokesReport stokes_check(const StateFamily& family, const SurfaceMesh& mesh,
                          const LoopPath& loop);

}  // namespace dualgeo
