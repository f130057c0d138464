#include "dualgeo/chsh.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "dualgeo/error.hpp"
#include "dualgeo/numerics.hpp"

namespace dualgeo {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using cd = std::complex<double>;
using numerics::kPi;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);
constexpr double kBoundSlack = 1e-9;
constexpr double kRefineStep = 1e-10;

// Outcome eigenvectors of cos(t) sigma_z + sin(t) sigma_x: column 0 is +1.
Matrix2d analyzer(double t) {
  const double c = std::cos(0.5 * t), s = std::sin(0.5 * t);
  Matrix2d m;
  m << c, -s, s, c;
  return m;
}

void require_two_qubits(const BipartiteState& psi) {
  require(psi.dim_a() == 2 && psi.dim_b() == 2, "state", "dimension-mismatch: needs two qubits");
  validate_state(psi);
}

// Joint probabilities without validation; the scan calls this per grid cell.
Matrix2d outcome_probabilities(const Eigen::Matrix2cd& m, double a, double b) {
  const Matrix2d u = analyzer(a), v = analyzer(b);
  const Eigen::Matrix2cd amp = u.transpose().cast<cd>() * m * v.cast<cd>();
  Matrix2d p = amp.cwiseAbs2();
  return p / p.sum();
}

double correlator_of(const Matrix2d& p) { return p(0, 0) - p(0, 1) - p(1, 0) + p(1, 1); }

double chsh_value(const Eigen::Matrix2cd& m, const std::array<double, 4>& x) {
  const double e_ab = correlator_of(outcome_probabilities(m, x[0], x[2]));
  const double e_abp = correlator_of(outcome_probabilities(m, x[0], x[3]));
  const double e_apb = correlator_of(outcome_probabilities(m, x[1], x[2]));
  const double e_apbp = correlator_of(outcome_probabilities(m, x[1], x[3]));
  return e_ab - e_abp + e_apb + e_apbp;
}

// Hooke-Jeeves pattern search maximizing |S| from a grid cell.
std::array<double, 4> refine(const Eigen::Matrix2cd& m, std::array<double, 4> x, double step) {
  double best = std::abs(chsh_value(m, x));
  while (step > kRefineStep) {
    bool improved = false;
    for (int k = 0; k < 4; ++k) {
      for (double sign : {1.0, -1.0}) {
        std::array<double, 4> trial = x;
        trial[k] += sign * step;
        const double value = std::abs(chsh_value(m, trial));
        if (value > best) {
          best = value;
          x = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Classical: return "classical";
    case Regime::Quantum: return "quantum";
    case Regime::SuperQuantum: return "super-quantum";
  }
  return "unknown";
}

Regime classify(double s) {
  const double m = std::abs(s);
  if (m <= 2.0 + kBoundSlack) return Regime::Classical;
  if (m <= kTsirelson + kBoundSlack) return Regime::Quantum;
  return Regime::SuperQuantum;
}

JointDistribution joint_distribution(const BipartiteState& psi, const MeasurementSetting& a,
                                     const MeasurementSetting& b) {
  require(a.party == Party::Alice, "a", "first setting must belong to Alice");
  require(b.party == Party::Bob, "b", "second setting must belong to Bob");
  return joint_distribution(psi, a.angle, b.angle);
}

JointDistribution joint_distribution(const BipartiteState& psi, double a, double b) {
  require_two_qubits(psi);
  require(std::isfinite(a), "a", "angle must be finite");
  require(std::isfinite(b), "b", "angle must be finite");
  JointDistribution d;
  d.p = outcome_probabilities(psi.amplitudes, a, b);
  d.a = a;
  d.b = b;
  return d;
}

double correlator(const JointDistribution& d) { return correlator_of(d.p); }

double geometric_correlator(const JointDistribution& d) {
  const double omega = d.p(0, 1) + d.p(1, 0);
  return 1.0 - 2.0 * omega;
}

CHSHResult chsh_S(const BipartiteState& psi, double a, double a_prime, double b,
                  double b_prime) {
  CHSHResult r;
  r.a = a;
  r.a_prime = a_prime;
  r.b = b;
  r.b_prime = b_prime;
  r.correlators(0, 0) = correlator(joint_distribution(psi, a, b));
  r.correlators(0, 1) = correlator(joint_distribution(psi, a, b_prime));
  r.correlators(1, 0) = correlator(joint_distribution(psi, a_prime, b));
  r.correlators(1, 1) = correlator(joint_distribution(psi, a_prime, b_prime));
  r.s = r.correlators(0, 0) - r.correlators(0, 1) + r.correlators(1, 0) + r.correlators(1, 1);
  r.regime = classify(r.s);
  return r;
}

ClassicalPolytope classical_polytope_max() {
  ClassicalPolytope out;
  out.max = -4.0;
  out.min = 4.0;
  std::vector<std::pair<int, std::array<int, 4>>> values;
  for (int mask = 0; mask < 16; ++mask) {
    std::array<int, 4> v{};
    for (int k = 0; k < 4; ++k) v[k] = (mask >> k) & 1 ? -1 : 1;
    // Deterministic outcomes make every correlator a product of signs.
    const int s = v[0] * v[2] - v[0] * v[3] + v[1] * v[2] + v[1] * v[3];
    values.emplace_back(s, v);
    out.max = std::max(out.max, static_cast<double>(s));
    out.min = std::min(out.min, static_cast<double>(s));
    ++out.strategies;
  }
  for (const auto& [s, v] : values)
    if (s == out.max) out.maximizers.push_back(v);
  return out;
}

MatrixXd correlator_table(const BipartiteState& psi, int grid_size, kernels::Policy policy) {
  require_two_qubits(psi);
  require(grid_size >= 8, "grid", "grid size must be at least 8");
  const auto n = static_cast<std::size_t>(grid_size);
  const std::vector<double> values = kernels::map_indices<double>(
      n * n,
      [&](std::size_t cell) {
        const double a = 2.0 * kPi * static_cast<double>(cell / n) / grid_size;
        const double b = 2.0 * kPi * static_cast<double>(cell % n) / grid_size;
        return correlator_of(outcome_probabilities(psi.amplitudes, a, b));
      },
      policy);
  MatrixXd e(grid_size, grid_size);
  for (std::size_t cell = 0; cell < n * n; ++cell) e(cell / n, cell % n) = values[cell];
  return e;
}

TsirelsonScan tsirelson_scan(const BipartiteState& psi, int grid_size, kernels::Policy policy) {
  const MatrixXd e = correlator_table(psi, grid_size, policy);
  const std::vector<kernels::ChshCell> rows = kernels::chsh_scan_rows(e, policy);
  const kernels::ChshCell cell = kernels::chsh_scan_best(rows);
  const double step = 2.0 * kPi / grid_size;

  TsirelsonScan out;
  out.table = ScanTable("tsirelson_scan", {"stage", "a", "a_prime", "b", "b_prime", "S", "abs_S"});
  out.table.meta["grid_size"] = grid_size;
  out.table.meta["tolerances"] = {{"refine_step", kRefineStep}, {"bound_slack", kBoundSlack}};
  for (const kernels::ChshCell& row : rows) {
    out.table.add_row({0.0, row.a * step, row.a_prime * step, row.b * step, row.b_prime * step,
                       row.s, row.abs_s});
  }

  const std::array<double, 4> x =
      refine(psi.amplitudes, {cell.a * step, cell.a_prime * step, cell.b * step,
                              cell.b_prime * step},
             0.5 * step);
  out.best = chsh_S(psi, x[0], x[1], x[2], x[3]);
  out.table.add_row({1.0, x[0], x[1], x[2], x[3], out.best.s, std::abs(out.best.s)});
  return out;
}

double loop_excess(const BipartiteState& psi, double a, double a_prime, double b,
                   double b_prime) {
  return std::max(0.0, std::abs(chsh_S(psi, a, a_prime, b, b_prime).s) - 2.0);
}

BipartiteState random_two_qubit_state(unsigned long long seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  Eigen::Matrix2cd m;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) m(i, k) = cd(normal(engine), normal(engine));
  m /= m.norm();
  return {m};
}

}  // namespace dualgeo
