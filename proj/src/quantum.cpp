#include "dualgeo/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dualgeo/error.hpp"
#include "dualgeo/numerics.hpp"

namespace dualgeo {

using Eigen::MatrixXcd;
using Eigen::Vector3d;
using Eigen::VectorXcd;
using cd = std::complex<double>;

namespace {

constexpr double kNormTolerance = 1e-12;

double arg_or_zero(cd z) { return z == cd(0.0, 0.0) ? 0.0 : std::arg(z); }

Eigen::Matrix2cd pauli(int axis) {
  Eigen::Matrix2cd m;
  switch (axis) {
    case 0: m << 0.0, 1.0, 1.0, 0.0; break;
    case 1: m << 0.0, cd(0.0, -1.0), cd(0.0, 1.0), 0.0; break;
    default: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

void require_rotation_on_b(const BipartiteState& psi, const RotationMap& rotation) {
  require(rotation.matrix.rows() == psi.dim_b() && rotation.matrix.cols() == psi.dim_b(),
          "rotation", "dimension-mismatch: rotation must act on subsystem B");
}

}  // namespace

BlochVector BlochVector::from_cartesian(const Vector3d& r) {
  BlochVector b;
  b.r = r;
  const double rho = std::hypot(r.x(), r.y());
  b.theta = std::atan2(rho, r.z());
  double phi = rho == 0.0 ? 0.0 : std::atan2(r.y(), r.x());
  if (phi < 0.0) phi += 2.0 * numerics::kPi;
  b.phi = phi;
  return b;
}

BipartiteState BipartiteState::product(const VectorXcd& a, const VectorXcd& b) {
  return {a * b.transpose()};
}

BipartiteState BipartiteState::bell() {
  MatrixXcd m = MatrixXcd::Zero(2, 2);
  m(0, 0) = m(1, 1) = 1.0 / std::sqrt(2.0);
  return {m};
}

BipartiteState BipartiteState::singlet() {
  MatrixXcd m = MatrixXcd::Zero(2, 2);
  m(0, 1) = 1.0 / std::sqrt(2.0);
  m(1, 0) = -1.0 / std::sqrt(2.0);
  return {m};
}

BipartiteState BipartiteState::partial(double p) {
  require(p >= 0.0 && p <= 1.0, "p", "must lie in [0, 1]");
  MatrixXcd m = MatrixXcd::Zero(2, 2);
  m(0, 0) = std::sqrt(p);
  m(1, 1) = std::sqrt(1.0 - p);
  return {m};
}

MatrixXcd SchmidtDecomposition::reconstruct() const {
  return left * coefficients.asDiagonal() * right.transpose();
}

void validate_state(const PureState& psi) {
  require(psi.amplitudes.size() >= 2, "state", "dimension must be at least 2");
  require(psi.amplitudes.allFinite(), "state", "amplitudes must be finite");
  require(std::abs(psi.amplitudes.squaredNorm() - 1.0) <= kNormTolerance, "state",
          "not normalized");
}

void validate_state(const BipartiteState& psi) {
  require(psi.dim_a() >= 1 && psi.dim_b() >= 1, "state", "empty amplitude array");
  require(psi.amplitudes.allFinite(), "state", "amplitudes must be finite");
  require(std::abs(psi.amplitudes.squaredNorm() - 1.0) <= kNormTolerance, "state",
          "not normalized");
}

void validate_density(const DensityMatrix& rho) {
  const MatrixXcd& m = rho.components;
  require(m.rows() == m.cols() && m.rows() >= 2, "rho", "must be square");
  require((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12, "rho", "not Hermitian");
  require(std::abs(m.trace() - cd(1.0, 0.0)) <= 1e-12, "rho", "trace must be 1");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() >= -1e-10, "rho", "negative eigenvalue");
}

BlochVector bloch_from_state(const PureState& psi) {
  validate_state(psi);
  require(psi.amplitudes.size() == 2, "state", "Bloch form needs a qubit");
  const cd alpha = psi.amplitudes(0);
  const cd beta = psi.amplitudes(1);
  BlochVector b;
  b.theta = 2.0 * std::atan2(std::abs(beta), std::abs(alpha));
  double phi = arg_or_zero(beta) - arg_or_zero(alpha);
  phi = std::fmod(phi, 2.0 * numerics::kPi);
  if (phi < 0.0) phi += 2.0 * numerics::kPi;
  b.phi = phi;
  const double s = std::sin(b.theta);
  b.r = Vector3d(s * std::cos(phi), s * std::sin(phi), std::cos(b.theta));
  return b;
}

DensityMatrix density_from_bloch(const BlochVector& b) {
  require(b.r.allFinite(), "r", "must be finite");
  require(b.r.norm() <= 1.0 + 1e-12, "r", "Bloch vector longer than 1");
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  for (int axis = 0; axis < 3; ++axis) m += b.r(axis) * pauli(axis);
  return {0.5 * m};
}

DensityMatrix density_from_state(const PureState& psi) {
  validate_state(psi);
  return {psi.amplitudes * psi.amplitudes.adjoint()};
}

Vector3d bloch_from_density(const DensityMatrix& rho) {
  require(rho.components.rows() == 2 && rho.components.cols() == 2, "rho", "needs a qubit");
  Vector3d r;
  for (int axis = 0; axis < 3; ++axis) r(axis) = (rho.components * pauli(axis)).trace().real();
  return r;
}

BipartiteState rotate_subsystem_local(const BipartiteState& psi, const RotationMap& rotation) {
  validate_state(psi);
  require_rotation_on_b(psi, rotation);
  return {psi.amplitudes * rotation.matrix.cast<cd>().transpose()};
}

BipartiteState rotate_subsystem_controlled(const BipartiteState& psi,
                                           const RotationMap& rotation) {
  validate_state(psi);
  require(psi.dim_a() == 2, "state", "dimension-mismatch: control subsystem must be a qubit");
  require_rotation_on_b(psi, rotation);
  BipartiteState out = psi;
  out.amplitudes.row(1) = psi.amplitudes.row(1) * rotation.matrix.cast<cd>().transpose();
  return out;
}

SchmidtDecomposition schmidt(const BipartiteState& psi) {
  validate_state(psi);
  Eigen::JacobiSVD<MatrixXcd> svd(psi.amplitudes, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition s;
  s.coefficients = svd.singularValues();
  s.left = svd.matrixU();
  // M = U S V^dagger, so the B-side vectors entering u_i v_i^T are conj(V).
  s.right = svd.matrixV().conjugate();
  return s;
}

DensityMatrix reduced_density_a(const BipartiteState& psi) {
  validate_state(psi);
  return {psi.amplitudes * psi.amplitudes.adjoint()};
}

double entanglement_entropy(const SchmidtDecomposition& s) {
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
    const double p = s.coefficients(i) * s.coefficients(i);
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::max(0.0, entropy);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(rho.components, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double p = eig.eigenvalues()(i);
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::max(0.0, entropy);
}

BipartiteState controlled_rotation_benchmark(double theta) {
  VectorXcd plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  VectorXcd zero(2);
  zero << 1.0, 0.0;
  return rotate_subsystem_controlled(BipartiteState::product(plus, zero),
                                     RotationMap::planar(2, 0, 1, theta));
}

Eigen::VectorXd coherence_gap(const Eigen::VectorXd& x, const RotationMap& rotation) {
  require(rotation.matrix.rows() == x.size(), "x", "dimension-mismatch with rotation");
  return x - rotation.matrix * x;
}

double overlap(std::span<const double> grid, std::span<const double> p1,
               std::span<const double> p2) {
  require(grid.size() >= 2, "grid", "needs at least 2 nodes");
  require(p1.size() == grid.size() && p2.size() == grid.size(), "grid",
          "grid mismatch between densities");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    require(grid[i + 1] > grid[i], "grid", "must be strictly increasing");
    require(p1[i] >= 0.0 && p2[i] >= 0.0, "p", "densities must be nonnegative");
    sum += 0.5 * (grid[i + 1] - grid[i]) * (p1[i] * p2[i] + p1[i + 1] * p2[i + 1]);
  }
  require(p1.back() >= 0.0 && p2.back() >= 0.0, "p", "densities must be nonnegative");
  return sum;
}

EcSplit ec_decomposition(double theta, double n) {
  require(std::isfinite(theta), "theta", "must be finite");
  require(std::isfinite(n) && n > 0.0, "N", "must be positive");
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  EcSplit out;
  // Snap the smaller share onto the ulp(N) grid; then N - small and the sum
  // back are both exact.
  const bool entanglement_small = s * s <= c * c;
  const double ulp = std::nextafter(n, std::numeric_limits<double>::infinity()) - n;
  const double small = std::round(n * (entanglement_small ? s * s : c * c) / ulp) * ulp;
  const double large = n - small;
  out.entanglement = entanglement_small ? small : large;
  out.coherence = entanglement_small ? large : small;
  return out;
}

}  // namespace dualgeo
