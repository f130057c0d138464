#pragma once

// Two-party +-1 measurements on two-qubit states: joint distributions,
// correlators, the CHSH sum and its classical and quantum bounds.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualgeo/kernels.hpp"
#include "dualgeo/quantum.hpp"
#include "dualgeo/scan_io.hpp"

namespace dualgeo {

enum class Party { Alice, Bob };

/// Analyzer direction cos(angle) sigma_z + sin(angle) sigma_x.
struct MeasurementSetting {
  double angle = 0.0;
  Party party = Party::Alice;
};

/// p(i, j) for outcomes s_A = (i == 0 ? +1 : -1), s_B likewise.
struct JointDistribution {
  Eigen::Matrix2d p = Eigen::Matrix2d::Zero();
  double a = 0.0;
  double b = 0.0;

  Eigen::Vector2d marginal_a() const { return p.rowwise().sum(); }
  Eigen::Vector2d marginal_b() const { return p.colwise().sum().transpose(); }
};

enum class Regime { Classical, Quantum, SuperQuantum };
std::string to_string(Regime regime);

/// Classical when |S| <= 2, quantum when |S| <= 2 sqrt 2, with slack 1e-9.
Regime classify(double s);

struct CHSHResult {
  double s = 0.0;
  double a = 0.0, a_prime = 0.0, b = 0.0, b_prime = 0.0;
  /// E(x, y) for x in {a, a'} (rows) and y in {b, b'} (columns).
  Eigen::Matrix2d correlators = Eigen::Matrix2d::Zero();
  Regime regime = Regime::Classical;
};

struct ClassicalPolytope {
  double max = 0.0;
  double min = 0.0;
  int strategies = 0;
  /// (A(a), A(a'), B(b), B(b')) for every strategy reaching max.
  std::vector<std::array<int, 4>> maximizers;
};

struct TsirelsonScan {
  CHSHResult best;
  /// Stage-0 rows: best grid cell per a-index. Stage-1 row: refined optimum.
  ScanTable table;
};

JointDistribution joint_distribution(const BipartiteState& psi, const MeasurementSetting& a,
                                     const MeasurementSetting& b);
JointDistribution joint_distribution(const BipartiteState& psi, double a, double b);

/// sum s_A s_B p(s_A, s_B).
double correlator(const JointDistribution& d);

/// E(a,b) - E(a,b') + E(a',b) + E(a',b').
CHSHResult chsh_S(const BipartiteState& psi, double a, double a_prime, double b, double b_prime);

/// Enumerates the 16 deterministic local strategies.
ClassicalPolytope classical_polytope_max();

/// Correlator table E(i, k) on the uniform angle grid 2 pi i / n.
Eigen::MatrixXd correlator_table(const BipartiteState& psi, int grid_size,
                                 kernels::Policy policy = kernels::Policy::Parallel);

/// Grid scan of |S| followed by pattern-search refinement of the best cell.
TsirelsonScan tsirelson_scan(const BipartiteState& psi, int grid_size,
                             kernels::Policy policy = kernels::Policy::Parallel);

/// 1 - 2 Omega with Omega = p(+,-) + p(-,+).
double geometric_correlator(const JointDistribution& d);

/// max(0, |S| - 2).
double loop_excess(const BipartiteState& psi, double a, double a_prime, double b,
                   double b_prime);

/// Haar-random two-qubit pure state from the given engine seed.
BipartiteState random_two_qubit_state(unsigned long long seed);

}  // namespace dualgeo
