#pragma once

// Finite-dimensional pure and mixed states: Bloch parametrization, subsystem
// rotations, Schmidt decomposition and entanglement entropy.

#include <span>
#include <utility>

#include <Eigen/Dense>

#include "dualgeo/infogeo.hpp"

namespace dualgeo {

struct PureState {
  Eigen::VectorXcd amplitudes;
};

struct DensityMatrix {
  Eigen::MatrixXcd components;
};

struct BlochVector {
  Eigen::Vector3d r = Eigen::Vector3d::Zero();
  double theta = 0.0;  // polar angle in [0, pi]
  double phi = 0.0;    // azimuth in [0, 2 pi)

  /// Builds (theta, phi) from r; the angles of r = 0 are 0.
  static BlochVector from_cartesian(const Eigen::Vector3d& r);
};

/// amplitudes(i, k) is the coefficient of |i>_A |k>_B.
struct BipartiteState {
  Eigen::MatrixXcd amplitudes;

  int dim_a() const { return static_cast<int>(amplitudes.rows()); }
  int dim_b() const { return static_cast<int>(amplitudes.cols()); }

  static BipartiteState product(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);
  /// (|00> + |11>) / sqrt 2.
  static BipartiteState bell();
  /// (|01> - |10>) / sqrt 2.
  static BipartiteState singlet();
  /// sqrt(p) |00> + sqrt(1 - p) |11>.
  static BipartiteState partial(double p);
};

struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;  // descending, nonnegative
  Eigen::MatrixXcd left;         // columns u_i
  Eigen::MatrixXcd right;        // columns v_i

  /// sum_i lambda_i u_i v_i^T as a d_A x d_B amplitude array.
  Eigen::MatrixXcd reconstruct() const;
};

void validate_state(const PureState& psi);
void validate_state(const BipartiteState& psi);
void validate_density(const DensityMatrix& rho);

BlochVector bloch_from_state(const PureState& psi);
DensityMatrix density_from_bloch(const BlochVector& b);
DensityMatrix density_from_state(const PureState& psi);
/// r_i = tr(rho sigma_i).
Eigen::Vector3d bloch_from_density(const DensityMatrix& rho);

/// (I x R) Psi.
BipartiteState rotate_subsystem_local(const BipartiteState& psi, const RotationMap& rotation);
/// (|0><0| x I + |1><1| x R) Psi; needs d_A = 2.
BipartiteState rotate_subsystem_controlled(const BipartiteState& psi, const RotationMap& rotation);

/// SVD of the amplitude array.
SchmidtDecomposition schmidt(const BipartiteState& psi);
/// tr_B |Psi><Psi| = M M^dagger.
DensityMatrix reduced_density_a(const BipartiteState& psi);
/// -sum lambda^2 log lambda^2 in nats.
double entanglement_entropy(const SchmidtDecomposition& s);
/// Von Neumann entropy of a density matrix from its eigenvalues.
double von_neumann_entropy(const DensityMatrix& rho);

/// (|0> + |1>)/sqrt 2 x |0> after a controlled planar rotation by theta.
BipartiteState controlled_rotation_benchmark(double theta);

/// (I - R) x.
Eigen::VectorXd coherence_gap(const Eigen::VectorXd& x, const RotationMap& rotation);

/// Trapezoid integral of p1 * p2 over a common (possibly nonuniform) grid.
double overlap(std::span<const double> grid, std::span<const double> p1,
               std::span<const double> p2);

struct EcSplit {
  double entanglement = 0.0;  // N sin^2 theta
  double coherence = 0.0;     // N cos^2 theta
};

/// Splits N into N sin^2 theta + N cos^2 theta with the two parts summing to
/// N exactly in floating point.
EcSplit ec_decomposition(double theta, double n);

}  // namespace dualgeo
